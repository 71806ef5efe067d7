# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels.

Drop-in replacements for ``_fallback``: same signatures, same results.
Counts are arbitrary-precision Python integers throughout; the speedup
comes from removing interpreter dispatch in the inner loops, not from
narrowing any arithmetic.
"""


def free_reduce(seq):
    cdef list out = []
    cdef Py_ssize_t ln = 0
    cdef long c
    for item in seq:
        c = item
        if ln > 0 and <long> out[ln - 1] == (c ^ 1):
            del out[ln - 1]
            ln -= 1
        else:
            out.append(c)
            ln += 1
    return out


def apply_images(letter_images, word):
    cdef list out = []
    cdef Py_ssize_t ln = 0
    cdef long c, d
    for item in word:
        c = item
        for sub in <tuple> letter_images[c]:
            d = sub
            if ln > 0 and <long> out[ln - 1] == (d ^ 1):
                del out[ln - 1]
                ln -= 1
            else:
                out.append(d)
                ln += 1
    return out


def dp_step(list counts, Py_ssize_t num_states, Py_ssize_t width, long lo,
            Py_ssize_t jmin, Py_ssize_t jmax,
            list new_counts, Py_ssize_t new_width, long new_lo, long cap,
            long[:] edge_src, long[:] edge_tgt, long[:] edge_delta):
    cdef object moved_out = 0
    cdef long new_mlo = new_lo + <long> new_width
    cdef long new_mhi = new_lo - 1
    cdef Py_ssize_t n_edges = edge_src.shape[0]
    cdef Py_ssize_t e, j, base, tbase, ti
    cdef long m0, m2
    cdef object c
    for e in range(n_edges):
        base = edge_src[e] * width
        m0 = lo + edge_delta[e]
        tbase = edge_tgt[e] * new_width + (m0 - new_lo)
        for j in range(jmin, jmax + 1):
            c = counts[base + j]
            if not c:
                continue
            m2 = m0 + <long> j
            if m2 > cap:
                moved_out = moved_out + c
            else:
                ti = tbase + j
                new_counts[ti] = new_counts[ti] + c
                if m2 < new_mlo:
                    new_mlo = m2
                if m2 > new_mhi:
                    new_mhi = m2
    return moved_out, new_mlo, new_mhi
