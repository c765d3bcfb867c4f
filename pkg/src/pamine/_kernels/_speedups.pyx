# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: phrase-selection search and leader clustering.

Behavioural twin of ``pamine._kernels.reference``; see there for the
contract. The selection search is pure integer arithmetic; the clustering
loop orders its float operations exactly like the pure-Python code (and the
extension is built with -ffp-contract=off) so the two backends agree bit
for bit.
"""
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"


cdef struct SearchState:
    int n
    int k
    long long penalty
    int full_mask
    long long *w
    int *type_bits
    unsigned char *same      # n * n
    unsigned char *invalid
    long long *suffix_top    # (n + 1) * (k + 1)
    int *chosen
    int *best_set
    long long best_obj
    bint has_best


cdef void _dfs(SearchState *st, int pos, int count, long long wsum,
               long long locked, int cover) noexcept:
    cdef int i, j, uncovered, mask
    cdef long long obj, bound, added
    if count == st.k:
        mask = st.full_mask & ~cover
        uncovered = 0
        while mask:
            mask &= mask - 1
            uncovered += 1
        obj = wsum - st.penalty * (locked + uncovered)
        if not st.has_best or obj > st.best_obj:
            st.best_obj = obj
            st.has_best = True
            for i in range(st.k):
                st.best_set[i] = st.chosen[i]
        return
    if st.n - pos < st.k - count:
        return
    bound = wsum + st.suffix_top[pos * (st.k + 1) + (st.k - count)] \
        - st.penalty * locked
    if st.has_best and bound <= st.best_obj:
        return
    added = st.invalid[pos]
    for i in range(count):
        added += st.same[pos * st.n + st.chosen[i]]
    st.chosen[count] = pos
    _dfs(st, pos + 1, count + 1, wsum + st.w[pos], locked + added,
         cover | st.type_bits[pos])
    _dfs(st, pos + 1, count, wsum, locked, cover)


def solve_selection(weights, type_rows, same_head, invalid, k, penalty, n_types=10):
    """Compiled twin of ``reference.solve_selection``."""
    cdef int n = len(weights)
    cdef int kk = k
    if not 1 <= kk <= n:
        raise ValueError(f"infeasible selection size k={k} for n={n}")
    cdef SearchState st
    cdef int i, j, c, lo, hi, mid, tlen
    cdef long long acc, wi
    cdef long long *tail = NULL
    st.n = n
    st.k = kk
    st.penalty = penalty
    st.full_mask = (1 << int(n_types)) - 1
    st.w = <long long *> malloc(n * sizeof(long long))
    st.type_bits = <int *> malloc(n * sizeof(int))
    st.same = <unsigned char *> malloc(n * n * sizeof(unsigned char))
    st.invalid = <unsigned char *> malloc(n * sizeof(unsigned char))
    st.suffix_top = <long long *> malloc((n + 1) * (kk + 1) * sizeof(long long))
    st.chosen = <int *> malloc(kk * sizeof(int))
    st.best_set = <int *> malloc(kk * sizeof(int))
    tail = <long long *> malloc(n * sizeof(long long))
    if (st.w == NULL or st.type_bits == NULL or st.same == NULL or
            st.invalid == NULL or st.suffix_top == NULL or st.chosen == NULL or
            st.best_set == NULL or tail == NULL):
        free(st.w); free(st.type_bits); free(st.same); free(st.invalid)
        free(st.suffix_top); free(st.chosen); free(st.best_set); free(tail)
        raise MemoryError()
    try:
        for i in range(n):
            st.w[i] = weights[i]
            st.invalid[i] = 1 if invalid[i] else 0
            st.type_bits[i] = 0
        for i, row in enumerate(type_rows):
            for t in row:
                if not 0 <= int(t) < int(n_types):
                    raise ValueError(f"type index {t} outside range({n_types})")
                st.type_bits[i] |= 1 << int(t)
        for i, row in enumerate(same_head):
            for j in range(n):
                st.same[i * n + j] = 1 if row[j] else 0
        for c in range((n + 1) * (kk + 1)):
            st.suffix_top[c] = 0
        tlen = 0
        for i in range(n - 1, -1, -1):
            wi = st.w[i]
            lo = 0
            hi = tlen
            while lo < hi:
                mid = (lo + hi) // 2
                if tail[mid] > wi:
                    lo = mid + 1
                else:
                    hi = mid
            for j in range(tlen, lo, -1):
                tail[j] = tail[j - 1]
            tail[lo] = wi
            tlen += 1
            acc = 0
            for c in range(1, kk + 1):
                if c <= tlen:
                    acc += tail[c - 1]
                st.suffix_top[i * (kk + 1) + c] = acc
        st.best_obj = 0
        st.has_best = False
        _dfs(&st, 0, 0, 0, 0, 0)
        assert st.has_best
        return st.best_obj, tuple(st.best_set[i] for i in range(kk))
    finally:
        free(st.w); free(st.type_bits); free(st.same); free(st.invalid)
        free(st.suffix_top); free(st.chosen); free(st.best_set); free(tail)


def leader_cluster(double[:, ::1] vectors, double tau):
    """Compiled twin of ``reference.leader_cluster``."""
    cdef Py_ssize_t m = vectors.shape[0]
    cdef Py_ssize_t dim = vectors.shape[1]
    cdef Py_ssize_t i, j, c
    cdef int n_clusters = 0, target
    cdef double acc, vnorm, dot, cos
    if m == 0:
        return []
    cdef double *sums = <double *> malloc(m * dim * sizeof(double))
    cdef double *norms = <double *> malloc(m * sizeof(double))
    cdef int *assignment = <int *> malloc(m * sizeof(int))
    if sums == NULL or norms == NULL or assignment == NULL:
        free(sums); free(norms); free(assignment)
        raise MemoryError()
    try:
        for i in range(m):
            acc = 0.0
            for j in range(dim):
                acc += vectors[i, j] * vectors[i, j]
            vnorm = sqrt(acc)
            if vnorm == 0.0:
                raise ValueError("zero-norm vector cannot be clustered")
            target = -1
            for c in range(n_clusters):
                dot = 0.0
                for j in range(dim):
                    dot += vectors[i, j] * sums[c * dim + j]
                cos = dot / (vnorm * norms[c])
                if cos >= tau:
                    target = <int> c
                    break
            if target < 0:
                for j in range(dim):
                    sums[n_clusters * dim + j] = vectors[i, j]
                norms[n_clusters] = vnorm
                assignment[i] = n_clusters
                n_clusters += 1
            else:
                for j in range(dim):
                    sums[target * dim + j] += vectors[i, j]
                acc = 0.0
                for j in range(dim):
                    acc += sums[target * dim + j] * sums[target * dim + j]
                norms[target] = sqrt(acc)
                assignment[i] = target
        return [assignment[i] for i in range(m)]
    finally:
        free(sums); free(norms); free(assignment)
