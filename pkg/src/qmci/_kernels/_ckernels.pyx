"""Compiled statevector update kernels (semantics match pykernels)."""


cdef inline Py_ssize_t _expand(Py_ssize_t g, int ns,
                               Py_ssize_t* pos, Py_ssize_t* bit) nogil:
    cdef Py_ssize_t i = g
    cdef int k
    cdef Py_ssize_t p
    for k in range(ns):
        p = pos[k]
        i = ((i >> p) << (p + 1)) | (bit[k] << p) | (i & ((<Py_ssize_t>1 << p) - 1))
    return i


cdef int _collect(unsigned long long mask, Py_ssize_t req,
                  Py_ssize_t* pos, Py_ssize_t* bit, int ns) nogil:
    cdef Py_ssize_t p = 0
    while mask >> p:
        if (mask >> p) & 1:
            pos[ns] = p
            bit[ns] = req
            ns += 1
        p += 1
    return ns


cdef void _sort_specials(Py_ssize_t* pos, Py_ssize_t* bit, int ns) nogil:
    # insertion sort; ns <= 64
    cdef int i, j
    cdef Py_ssize_t p, b
    for i in range(1, ns):
        p = pos[i]
        b = bit[i]
        j = i - 1
        while j >= 0 and pos[j] > p:
            pos[j + 1] = pos[j]
            bit[j + 1] = bit[j]
            j -= 1
        pos[j + 1] = p
        bit[j + 1] = b


def apply_2x2(double complex[::1] amps, int n, int target,
              double complex u00, double complex u01,
              double complex u10, double complex u11,
              unsigned long long pos_mask=0, unsigned long long neg_mask=0):
    cdef Py_ssize_t pos[64]
    cdef Py_ssize_t bit[64]
    cdef int ns = 0
    cdef Py_ssize_t g, i0, i1, npairs
    cdef Py_ssize_t tbit = <Py_ssize_t>1 << target
    cdef double complex a0, a1
    with nogil:
        ns = _collect(<unsigned long long>tbit, 0, pos, bit, ns)
        ns = _collect(pos_mask, 1, pos, bit, ns)
        ns = _collect(neg_mask, 0, pos, bit, ns)
        _sort_specials(pos, bit, ns)
        npairs = <Py_ssize_t>1 << (n - ns)
        for g in range(npairs):
            i0 = _expand(g, ns, pos, bit)
            i1 = i0 | tbit
            a0 = amps[i0]
            a1 = amps[i1]
            amps[i0] = u00 * a0 + u01 * a1
            amps[i1] = u10 * a0 + u11 * a1


def apply_kq(double complex[::1] amps, int n, targets,
             double complex[:, ::1] u,
             unsigned long long pos_mask=0, unsigned long long neg_mask=0):
    cdef Py_ssize_t pos[64]
    cdef Py_ssize_t bit[64]
    cdef Py_ssize_t offs[8]
    cdef double complex buf[8]
    cdef double complex acc
    cdef int ns = 0, k = len(targets), j, r, c
    cdef Py_ssize_t g, base, nbase, b
    cdef unsigned long long tmask = 0
    cdef Py_ssize_t tpos[3]
    for j in range(k):
        tpos[j] = targets[j]
        tmask |= <unsigned long long>1 << tpos[j]
    with nogil:
        ns = _collect(tmask, 0, pos, bit, ns)
        ns = _collect(pos_mask, 1, pos, bit, ns)
        ns = _collect(neg_mask, 0, pos, bit, ns)
        _sort_specials(pos, bit, ns)
        for b in range(<Py_ssize_t>1 << k):
            offs[b] = 0
            for j in range(k):
                if (b >> j) & 1:
                    offs[b] |= <Py_ssize_t>1 << tpos[j]
        nbase = <Py_ssize_t>1 << (n - ns)
        for g in range(nbase):
            base = _expand(g, ns, pos, bit)
            for c in range(1 << k):
                buf[c] = amps[base + offs[c]]
            for r in range(1 << k):
                acc = 0
                for c in range(1 << k):
                    acc = acc + u[r, c] * buf[c]
                amps[base + offs[r]] = acc


def apply_sign_flip(double complex[::1] amps, int n,
                    unsigned long long mask, unsigned long long value):
    cdef Py_ssize_t pos[64]
    cdef Py_ssize_t bit[64]
    cdef int ns = 0
    cdef Py_ssize_t g, i, nbase
    with nogil:
        ns = _collect(mask & ~value, 0, pos, bit, ns)
        ns = _collect(value, 1, pos, bit, ns)
        _sort_specials(pos, bit, ns)
        nbase = <Py_ssize_t>1 << (n - ns)
        for g in range(nbase):
            i = _expand(g, ns, pos, bit)
            amps[i] = -amps[i]
