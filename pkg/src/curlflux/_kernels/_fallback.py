"""Pure-Python reference kernels.

The compiled extension (``_core``) implements the same three functions with
identical semantics; this module is the fallback selected at import time when
the extension is not built.  Keep the two in lockstep: the test suite runs
them against each other whenever both are importable.
"""


def free_reduce(seq):
    """Freely reduce a letter sequence; returns a new list.

    Letters are integer codes with ``inverse(c) == c ^ 1``.
    """
    out = []
    push = out.append
    pop = out.pop
    for c in seq:
        if out and out[-1] == c ^ 1:
            pop()
        else:
            push(c)
    return out


def apply_images(letter_images, word):
    """Substitute each letter by its image and freely reduce.

    ``letter_images`` is indexed by letter code (length 2r).  Returns a list.
    """
    out = []
    push = out.append
    pop = out.pop
    for c in word:
        for d in letter_images[c]:
            if out and out[-1] == d ^ 1:
                pop()
            else:
                push(d)
    return out


def dp_step(counts, num_states, width, lo, jmin, jmax,
            new_counts, new_width, new_lo, cap,
            edge_src, edge_tgt, edge_delta):
    """Advance one word-length level of the image-length counting DP.

    ``counts`` holds one slot per (state, image length): index
    ``s * width + (m - lo)``.  Occupied slots lie within columns
    [jmin, jmax].  For every edge (s -> t, delta) each count migrates to
    ``m + delta`` in ``new_counts`` (laid out with ``new_lo``/``new_width``),
    except counts whose new image length exceeds ``cap``, which are summed
    into the returned out-bucket.

    Returns ``(moved_out, new_mlo, new_mhi)`` where the m-bounds are absolute
    image lengths of occupied new slots (``new_mlo > new_mhi`` when empty).
    """
    moved_out = 0
    new_mlo = new_lo + new_width  # sentinel: empty
    new_mhi = new_lo - 1
    n_edges = len(edge_src)
    for e in range(n_edges):
        base = edge_src[e] * width
        m0 = lo + edge_delta[e]
        tbase = edge_tgt[e] * new_width - new_lo + m0
        for j in range(jmin, jmax + 1):
            c = counts[base + j]
            if not c:
                continue
            m2 = m0 + j
            if m2 > cap:
                moved_out += c
            else:
                new_counts[tbase + j] += c
                if m2 < new_mlo:
                    new_mlo = m2
                if m2 > new_mhi:
                    new_mhi = m2
    return moved_out, new_mlo, new_mhi
