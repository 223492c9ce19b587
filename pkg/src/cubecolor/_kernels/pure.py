"""Pure-Python versions of the enumeration kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and bit-identical results.  Colors are 0-based inside the kernels; colorings
are returned as one flat ``bytes`` object, ``n`` bytes per coloring.
"""

from array import array

MAX_SUBSET_BITS = 20


def _lower_neighbors(d):
    n = 1 << d
    return [[v ^ (1 << i) for i in range(d) if v ^ (1 << i) < v] for v in range(n)]


def enumerate_proper(d, q):
    """All proper q-colorings of Q_d in lexicographic order, packed flat."""
    n = 1 << d
    lower = _lower_neighbors(d)
    col = [-1] * n
    out = bytearray()
    v = 0
    while v >= 0:
        c = col[v] + 1
        while c < q:
            for w in lower[v]:
                if col[w] == c:
                    break
            else:
                break
            c += 1
        if c == q:
            col[v] = -1
            v -= 1
            continue
        col[v] = c
        if v == n - 1:
            out.extend(col)
        else:
            v += 1
    return bytes(out)


def _pack(flat, n, width):
    rows = []
    for i in range(0, len(flat), n):
        x = 0
        for j in range(n):
            x |= flat[i + j] << (j * width)
        rows.append(x)
    return rows


def count_avoiding_pairs(flat, n, start, stop):
    """Count (i, j) with i in [start, stop) whose rows differ at every position."""
    m = len(flat) // n
    if m == 0 or start >= stop:
        return 0
    top = max(flat) if flat else 0
    width = max(1, int(top).bit_length())
    rows = _pack(flat, n, width)
    low = 0
    for j in range(n):
        low |= 1 << (j * width)
    total = 0
    for i in range(start, stop):
        a = rows[i]
        for b in rows:
            x = a ^ b
            fold = x
            for s in range(1, width):
                fold |= x >> s
            if fold & low == low:
                total += 1
    return total


def _direction_masks(d):
    n = 1 << d
    masks = []
    for i in range(d):
        m = 0
        for v in range(n):
            if not (v >> i) & 1:
                m |= 1 << v
        masks.append(m)
    return masks


def independent_masks(d):
    """Bitmasks (bit v set iff v in S) of every independent set of Q_d, ascending."""
    n = 1 << d
    if n > MAX_SUBSET_BITS:
        raise ValueError("subset scan over 2^%d sets refused" % n)
    dirs = [(m, 1 << i) for i, m in enumerate(_direction_masks(d))]
    out = array("Q")
    for s in range(1 << n):
        for m, shift in dirs:
            if s & m & (s >> shift):
                break
        else:
            out.append(s)
    return out


def count_independent(d):
    return len(independent_masks(d))


def count_disjoint_pairs(masks, start, stop):
    """Count (i, j) with i in [start, stop) and masks[i] & masks[j] == 0."""
    total = 0
    for i in range(start, stop):
        a = masks[i]
        for b in masks:
            if not a & b:
                total += 1
    return total
