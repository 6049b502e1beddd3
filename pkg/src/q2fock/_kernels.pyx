# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled adaptive Gauss-Kronrod kernel for the density family.

Mirrors ``q2fock.quadrature.integrate_family`` step for step: same panel
order, same acceptance test, same summation order.
"""

from libc.math cimport sin, cos, fabs, pow
from libc.stdlib cimport malloc, realloc, free

from q2fock.quadrature import QuadratureError, QuadratureResult

cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]

cdef double MIN_WIDTH_FRACTION = 1e-15


cdef struct Family:
    double pref
    double c1
    double c2
    double a1m1
    double a2
    int factored
    int mode
    int k
    double scale
    double t


cdef inline double family_eval(Family* p, double theta) nogil:
    cdef double s = sin(theta)
    cdef double c = cos(theta)
    cdef double s2 = s * s
    cdef double cc = c * c
    cdef double d, val
    if p.factored:
        d = p.c2 * (p.a1m1 + cc) * (p.a2 + s2)
    else:
        d = 1.0 + p.c1 * s2 - p.c2 * s2 * s2
    val = p.pref * cc / d
    if p.mode == 0:
        if p.k:
            val *= pow(p.scale * s, p.k)
    else:
        val /= 1.0 - p.t * s2
    return val


cdef inline void gk15(Family* p, double lo, double hi, double* value, double* err) nogil:
    cdef double centre = 0.5 * (lo + hi)
    cdef double half = 0.5 * (hi - lo)
    cdef double fc = family_eval(p, centre)
    cdef double kron = fc * WGK[7]
    cdef double gauss = fc * WG[3]
    cdef double dx, fsum
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        fsum = family_eval(p, centre - dx) + family_eval(p, centre + dx)
        kron += WGK[j] * fsum
        if j % 2 == 1:
            gauss += WG[j // 2] * fsum
    value[0] = kron * half
    err[0] = fabs((kron - gauss) * half)


def integrate_family(double pref, double a, double a1, double a2, bint factored,
                     int mode, int k, double scale, double t,
                     double lo, double hi, double tol, long budget=1000000):
    cdef Family fam
    cdef double am1 = a - 1.0
    fam.pref = pref
    fam.c1 = 4.0 * am1 * (a + 2.0)
    fam.c2 = 16.0 * am1
    fam.a1m1 = a1 - 1.0
    fam.a2 = a2
    fam.factored = factored
    fam.mode = mode
    fam.k = k
    fam.scale = scale
    fam.t = t

    if tol <= 0:
        raise ValueError("tol must be positive")
    if hi == lo:
        return QuadratureResult(0.0, 0.0, 0)
    cdef double sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0

    cdef double width = hi - lo
    cdef double total = 0.0, err_total = 0.0
    cdef double pa, pb, mid, value, err
    cdef long evals = 0
    cdef Py_ssize_t cap = 64, top = 0
    cdef double* stack = <double*> malloc(2 * cap * sizeof(double))
    cdef double* grown
    cdef bint exhausted = False
    cdef bint oom = False
    if stack == NULL:
        raise MemoryError()
    stack[0] = lo
    stack[1] = hi
    top = 1
    try:
        with nogil:
            while top > 0:
                top -= 1
                pa = stack[2 * top]
                pb = stack[2 * top + 1]
                if evals + 15 > budget:
                    exhausted = True
                    break
                gk15(&fam, pa, pb, &value, &err)
                evals += 15
                if err <= tol * (pb - pa) / width or (pb - pa) <= MIN_WIDTH_FRACTION * width:
                    total += value
                    err_total += err
                else:
                    if top + 2 > cap:
                        cap *= 2
                        grown = <double*> realloc(stack, 2 * cap * sizeof(double))
                        if grown == NULL:
                            oom = True
                            break
                        stack = grown
                    mid = 0.5 * (pa + pb)
                    stack[2 * top] = mid
                    stack[2 * top + 1] = pb
                    stack[2 * top + 2] = pa
                    stack[2 * top + 3] = mid
                    top += 2
    finally:
        free(stack)
    if oom:
        raise MemoryError()
    if exhausted:
        raise QuadratureError(f"budget of {budget} evaluations exhausted on [{lo}, {hi}]")
    return QuadratureResult(sign * total, err_total, evals)
