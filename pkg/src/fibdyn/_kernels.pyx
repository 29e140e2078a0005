# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Complex arithmetic is spelled out on split real/imaginary parts in exactly
the order CPython uses, and libm supplies hypot/log/log1p/exp/pow/nextafter,
so every result matches ``fibdyn._kernels_py`` bit for bit.
"""
from libc.math cimport exp, hypot, isfinite, log, log1p, nextafter, pow, sqrt, INFINITY, NAN

NAME = "cython"

cdef enum:
    UNDECIDED = 0
    ESCAPED_CONSECUTIVE = 1
    ESCAPED_SINGLE = 2
    ESCAPED_OUTER = 3
    INSIDE_EXACT_C0 = 4
    INSIDE_BIDISK = 5
    INSIDE_PERIODIC = 6
    LOCUS_INSIDE_BOUND = 7
    LOCUS_OUTSIDE_BOUND = 8
    LOCUS_BOUNDED = 9
    LOCUS_ESCAPED = 10
    ERROR = 255

cdef double SWITCH = 1e100


cdef inline void horner(const double[:] cre, const double[:] cim, double zr, double zi,
                        double* outr, double* outi) noexcept nogil:
    cdef Py_ssize_t k = cre.shape[0] - 1
    cdef double ar = cre[k], ai = cim[k], tr, ti
    while k > 0:
        k -= 1
        tr = ar * zr - ai * zi
        ti = ar * zi + ai * zr
        ar = tr + cre[k]
        ai = ti + cim[k]
    outr[0] = ar
    outi[0] = ai


cdef inline void ipow(double xr, double xi, long k, double* outr, double* outi) noexcept nogil:
    cdef double rr = xr, ri = xi, tr
    cdef long j
    for j in range(k - 1):
        tr = rr * xr - ri * xi
        ri = rr * xi + ri * xr
        rr = tr
    outr[0] = rr
    outi[0] = ri


cdef int classify_one(double zr, double zi, double cr, double ci,
                      const double[:] cre, const double[:] cim,
                      double M2, double R2, double outer2, double inner2, bint c0,
                      long budget, long* idx) noexcept nogil:
    cdef double pr = zr, pi = zi, qr, qi, a2, b2, tr, ti
    cdef double spr, spi, sqr, sqi
    cdef long n = 0, power = 1, lam = 0
    cdef double beta1 = (1.0 + sqrt(5.0)) / 2.0
    horner(cre, cim, zr, zi, &qr, &qi)
    idx[0] = 0
    if c0 and pow(hypot(qr, qi), beta1) * hypot(pr, pi) <= 1.0:
        return INSIDE_EXACT_C0
    spr, spi, sqr, sqi = pr, pi, qr, qi
    while n < budget:
        a2 = pr * pr + pi * pi
        b2 = qr * qr + qi * qi
        idx[0] = n
        if a2 > M2 and b2 > M2:
            return ESCAPED_CONSECUTIVE
        if a2 > R2:
            return ESCAPED_SINGLE
        if a2 > outer2 and b2 > outer2:
            return ESCAPED_OUTER
        if a2 < inner2 and b2 < inner2:
            return INSIDE_BIDISK
        tr = qr * pr - qi * pi
        ti = qr * pi + qi * pr
        pr, pi = qr, qi
        qr = tr + cr
        qi = ti + ci
        n += 1
        if pr == spr and pi == spi and qr == sqr and qi == sqi:
            idx[0] = n
            return INSIDE_PERIODIC
        lam += 1
        if lam == power:
            spr, spi, sqr, sqi = pr, pi, qr, qi
            power *= 2
            lam = 0
    idx[0] = n
    return UNDECIDED


cdef inline double pad_down(double x) noexcept nogil:
    return nextafter(nextafter(x, -INFINITY), -INFINITY)


cdef inline double pad_up(double x) noexcept nogil:
    return nextafter(nextafter(x, INFINITY), INFINITY)


cdef int green_one(double pr, double pi, double qr, double qi, double cr, double ci,
                   double C, double tol, const double[:] d, const double[:] tail,
                   long min_n, double* out) noexcept nogil:
    """Returns 0 on success, 1 if tol is unreachable, 2 on overflow."""
    cdef double ac = hypot(cr, ci)
    cdef bint log_mode = False
    cdef long n = 0
    cdef Py_ssize_t nd = d.shape[0]
    cdef double L, width, m, err, tr, ti, x, eps_hi, eps_lo, lo, hi
    cdef double plo = 0.0, phi = 0.0, clo = 0.0, chi = 0.0, Lp, Lq
    while True:
        if log_mode:
            L = 0.5 * (plo + phi)
            width = phi - plo
        else:
            m = hypot(pr, pi)
            L = log(m) if m > 1.0 else 0.0
            width = 0.0
        err = C * tail[n] + width / d[n]
        if n >= min_n and L > 0.0 and err < tol:
            out[0] = L / d[n]
            return 0
        if n + 2 >= nd:
            return 1
        if not log_mode and hypot(pr, pi) > SWITCH and hypot(qr, qi) > SWITCH:
            log_mode = True
            Lp = log(hypot(pr, pi))
            Lq = log(hypot(qr, qi))
            plo, phi = pad_down(Lp), pad_up(Lp)
            clo, chi = pad_down(Lq), pad_up(Lq)
        if log_mode:
            x = ac * exp(-(plo + clo))
            eps_hi = log1p(x)
            eps_lo = -log1p(-x)
            lo = pad_down(plo + clo - eps_lo)
            hi = pad_up(phi + chi + eps_hi)
            plo, phi = clo, chi
            clo, chi = lo, hi
        else:
            tr = qr * pr - qi * pi
            ti = qr * pi + qi * pr
            pr, pi = qr, qi
            qr = tr + cr
            qi = ti + ci
            if not isfinite(hypot(qr, qi)):
                return 2
        n += 1


def classify_block(const double[:] re, const double[:] im, double cr, double ci,
                   const double[:] cre, const double[:] cim, double M2, double R2,
                   double outer2, double inner2, bint c0_oracle, long budget,
                   unsigned char[:] tag, int[:] iters):
    cdef Py_ssize_t k
    cdef long n
    with nogil:
        for k in range(re.shape[0]):
            tag[k] = classify_one(re[k], im[k], cr, ci, cre, cim, M2, R2, outer2, inner2,
                                  c0_oracle, budget, &n)
            iters[k] = n


def green_block(const double[:] re, const double[:] im, double cr, double ci,
                const double[:] cre, const double[:] cim, double M2, double R2,
                double outer2, double inner2, bint c0_oracle, long budget,
                double C, double tol, const double[:] d, const double[:] tail,
                unsigned char[:] tag, int[:] iters, double[:] green):
    cdef Py_ssize_t k
    cdef long n
    cdef int t
    cdef double g, qr, qi
    with nogil:
        for k in range(re.shape[0]):
            t = classify_one(re[k], im[k], cr, ci, cre, cim, M2, R2, outer2, inner2,
                             c0_oracle, budget, &n)
            g = 0.0
            if t == ESCAPED_CONSECUTIVE or t == ESCAPED_SINGLE or t == ESCAPED_OUTER:
                horner(cre, cim, re[k], im[k], &qr, &qi)
                if green_one(re[k], im[k], qr, qi, cr, ci, C, tol, d, tail, n + 1, &g) != 0:
                    t = ERROR
                    g = NAN
            tag[k] = t
            iters[k] = n
            green[k] = g


def critical_block(const double[:] re, const double[:] im, double M2, double R2,
                   double inner2, double outer2, long budget,
                   unsigned char[:] tag, int[:] iters):
    cdef Py_ssize_t k
    cdef double cr, ci, a2, pr, pi, qr, qi, p2, q2, tr, ti, spr, spi, sqr, sqi
    cdef long n, power, lam
    cdef int t
    with nogil:
        for k in range(re.shape[0]):
            cr = re[k]
            ci = im[k]
            a2 = cr * cr + ci * ci
            n = 0
            if a2 <= inner2:
                t = LOCUS_INSIDE_BOUND
            elif a2 >= outer2:
                t = LOCUS_OUTSIDE_BOUND
            else:
                t = LOCUS_BOUNDED
                pr = pi = qr = qi = 0.0
                spr, spi, sqr, sqi = pr, pi, qr, qi
                power = 1
                lam = 0
                while n < budget:
                    p2 = pr * pr + pi * pi
                    q2 = qr * qr + qi * qi
                    if (p2 > M2 and q2 > M2) or p2 > R2:
                        t = LOCUS_ESCAPED
                        break
                    tr = qr * pr - qi * pi
                    ti = qr * pi + qi * pr
                    pr, pi = qr, qi
                    qr = tr + cr
                    qi = ti + ci
                    n += 1
                    if pr == spr and pi == spi and qr == sqr and qi == sqi:
                        break
                    lam += 1
                    if lam == power:
                        spr, spi, sqr, sqi = pr, pi, qr, qi
                        power *= 2
                        lam = 0
                if t == LOCUS_BOUNDED:
                    n = budget
            tag[k] = t
            iters[k] = n


def general_block(const double[:] re, const double[:] im, double cr, double ci,
                  const double[:] cre, const double[:] cim, long a, long b, double M2,
                  long budget, unsigned char[:] tag, int[:] iters):
    cdef Py_ssize_t k
    cdef double pr, pi, qr, qi, ar, ai, br, bi
    cdef long n
    cdef int t
    with nogil:
        for k in range(re.shape[0]):
            pr = re[k]
            pi = im[k]
            horner(cre, cim, pr, pi, &qr, &qi)
            n = 0
            t = UNDECIDED
            while n < budget:
                if pr * pr + pi * pi > M2 and qr * qr + qi * qi > M2:
                    t = ESCAPED_CONSECUTIVE
                    break
                ipow(qr, qi, a, &ar, &ai)
                ipow(pr, pi, b, &br, &bi)
                pr, pi = qr, qi
                qr = (ar * br - ai * bi) + cr
                qi = (ar * bi + ai * br) + ci
                n += 1
            tag[k] = t
            iters[k] = n
