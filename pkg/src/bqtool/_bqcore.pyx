# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled status kernel.

Instruction-for-instruction mirror of ``_bqpure.run_status``: the same
floating-point operations in the same order (complex arithmetic expanded
into explicit real/imaginary parts, moduli via the platform hypot), so the
two backends return bitwise-identical verdicts.  Built with
``-ffp-contract=off`` to keep the compiler from fusing multiply-adds.
"""

from libc.math cimport hypot, fabs, INFINITY
from libc.stdlib cimport malloc, realloc, free

LARGE = 1e300

CERTIFIED = 0
FAILS = 1
INCONCLUSIVE = 2
REDUCIBLE = 3

cdef double _LARGE = 1e300


cdef struct Frame:
    double u_re, u_im
    double v_re, v_im
    double g_re, g_im
    double u_mod, v_mod, g_mod


def run_status(double x_re, double x_im, double y_re, double y_im,
               double z_re, double z_im, double tau=1e-9,
               double margin=1e-6, double floor=0.0, long budget=100000):
    """Verdict for one triple: (status, nodes, count of |value| <= 2).

    Status codes: 0 certified, 1 fails, 2 inconclusive, 3 reducible.
    """
    cdef double two_margin = 2.0 + margin
    cdef double floor_m = floor
    if two_margin > floor_m:
        floor_m = two_margin

    # mu = x*x + y*y + z*z - x*y*z, associating exactly as the pure kernel
    cdef double sx_re = x_re * x_re - x_im * x_im
    cdef double sx_im = x_re * x_im + x_im * x_re
    cdef double sy_re = y_re * y_re - y_im * y_im
    cdef double sy_im = y_re * y_im + y_im * y_re
    cdef double sz_re = z_re * z_re - z_im * z_im
    cdef double sz_im = z_re * z_im + z_im * z_re
    cdef double s_re = (sx_re + sy_re) + sz_re
    cdef double s_im = (sx_im + sy_im) + sz_im
    cdef double xy_re = x_re * y_re - x_im * y_im
    cdef double xy_im = x_re * y_im + x_im * y_re
    cdef double xyz_re = xy_re * z_re - xy_im * z_im
    cdef double xyz_im = xy_re * z_im + xy_im * z_re
    cdef double mu_re = s_re - xyz_re
    cdef double mu_im = s_im - xyz_im

    cdef double xm = hypot(x_re, x_im)
    cdef double ym = hypot(y_re, y_im)
    cdef double zm = hypot(z_re, z_im)
    cdef long omega2 = 0
    if xm <= 2.0:
        omega2 += 1
    if ym <= 2.0:
        omega2 += 1
    if zm <= 2.0:
        omega2 += 1

    cdef double[3] b_re
    cdef double[3] b_im
    b_re[0] = x_re; b_im[0] = x_im
    b_re[1] = y_re; b_im[1] = y_im
    b_re[2] = z_re; b_im[2] = z_im

    # Only the first witness counts; only a boundary (±2) first witness
    # may pre-empt the reducibility test.
    cdef int witness = -1
    cdef bint boundary = 0
    cdef int idx
    cdef double vre, vim
    for idx in range(3):
        vre = b_re[idx]
        vim = b_im[idx]
        if fabs(vim) <= tau and fabs(vre) <= 2.0 + tau:
            witness = idx
            boundary = fabs(fabs(vre) - 2.0) <= tau
            break
    if witness >= 0 and boundary:
        return (FAILS, 3, omega2)
    cdef double dre = mu_re - 4.0
    cdef double dim = mu_im
    if dre * dre + dim * dim <= tau * tau:
        return (REDUCIBLE, 3, omega2)
    if witness >= 0:
        return (FAILS, 3, omega2)
    cdef double sq_re, sq_im
    for idx in range(3):
        vre = b_re[idx]
        vim = b_im[idx]
        sq_re = vre * vre - vim * vim
        sq_im = vre * vim + vim * vre
        dre = sq_re - mu_re
        dim = sq_im - mu_im
        if dre * dre + dim * dim <= tau * tau:
            return (FAILS, 3, omega2)

    # breadth-first exploration over a growable FIFO of 9-double frames
    cdef long nodes = 3
    cdef bint fail = 0
    cdef Py_ssize_t cap = 1024
    cdef Py_ssize_t head = 0
    cdef Py_ssize_t tail = 0
    cdef Frame* q = <Frame*> malloc(cap * sizeof(Frame))
    if q == NULL:
        raise MemoryError()
    cdef Frame* grown
    cdef Frame fr
    cdef double u_re, u_im, v_re, v_im, g_re, g_im
    cdef double um, vm_, gm
    cdef double small, flank_min, flank_max
    cdef double a_re, a_im, a_m, o_re, o_im, o_m
    cdef double t_re, t_im, t_m
    cdef bint t_large
    cdef int side
    cdef int status = INCONCLUSIVE

    try:
        # seeds: far = u*v - near for (x,y;z), (x,z;y), (y,z;x)
        for side in range(3):
            if side == 0:
                a_re = x_re; a_im = x_im; a_m = xm
                v_re = y_re; v_im = y_im; vm_ = ym
                o_re = z_re; o_im = z_im; o_m = zm
            elif side == 1:
                a_re = x_re; a_im = x_im; a_m = xm
                v_re = z_re; v_im = z_im; vm_ = zm
                o_re = y_re; o_im = y_im; o_m = ym
            else:
                a_re = y_re; a_im = y_im; a_m = ym
                v_re = z_re; v_im = z_im; vm_ = zm
                o_re = x_re; o_im = x_im; o_m = xm
            if a_m * vm_ + o_m > _LARGE:
                t_re = 0.0; t_im = 0.0; t_m = INFINITY; t_large = 1
            else:
                t_re = a_re * v_re - a_im * v_im
                t_im = a_re * v_im + a_im * v_re
                t_re = t_re - o_re
                t_im = t_im - o_im
                t_m = hypot(t_re, t_im)
                t_large = 0
            nodes += 1
            if t_m <= 2.0:
                omega2 += 1
            if not t_large and not fail:
                if fabs(t_im) <= tau and fabs(t_re) <= 2.0 + tau:
                    fail = 1
                else:
                    sq_re = t_re * t_re - t_im * t_im
                    sq_im = t_re * t_im + t_im * t_re
                    dre = sq_re - mu_re
                    dim = sq_im - mu_im
                    if dre * dre + dim * dim <= tau * tau:
                        fail = 1
            q[tail].u_re = a_re; q[tail].u_im = a_im
            q[tail].v_re = v_re; q[tail].v_im = v_im
            q[tail].g_re = t_re; q[tail].g_im = t_im
            q[tail].u_mod = a_m; q[tail].v_mod = vm_; q[tail].g_mod = t_m
            tail += 1

        while head < tail:
            if fail:
                status = FAILS
                break
            if nodes >= budget:
                status = INCONCLUSIVE
                break
            fr = q[head]
            head += 1
            um = fr.u_mod
            vm_ = fr.v_mod
            gm = fr.g_mod
            small = um
            if vm_ < small:
                small = vm_
            if gm < small:
                small = gm
            flank_min = vm_ if vm_ < um else um
            flank_max = vm_ if vm_ > um else um
            if small >= floor_m and flank_min >= two_margin and gm >= flank_max:
                continue
            if tail + 2 > cap:
                cap = cap * 2
                while tail + 2 > cap:
                    cap = cap * 2
                grown = <Frame*> realloc(q, cap * sizeof(Frame))
                if grown == NULL:
                    raise MemoryError()
                q = grown
            for side in range(2):
                if side == 0:
                    a_re = fr.u_re; a_im = fr.u_im; a_m = um
                    o_re = fr.v_re; o_im = fr.v_im; o_m = vm_
                else:
                    a_re = fr.v_re; a_im = fr.v_im; a_m = vm_
                    o_re = fr.u_re; o_im = fr.u_im; o_m = um
                if a_m * gm + o_m > _LARGE:
                    t_re = 0.0; t_im = 0.0; t_m = INFINITY; t_large = 1
                else:
                    t_re = a_re * fr.g_re - a_im * fr.g_im
                    t_im = a_re * fr.g_im + a_im * fr.g_re
                    t_re = t_re - o_re
                    t_im = t_im - o_im
                    t_m = hypot(t_re, t_im)
                    t_large = 0
                nodes += 1
                if t_m <= 2.0:
                    omega2 += 1
                if not t_large and not fail:
                    if fabs(t_im) <= tau and fabs(t_re) <= 2.0 + tau:
                        fail = 1
                    else:
                        sq_re = t_re * t_re - t_im * t_im
                        sq_im = t_re * t_im + t_im * t_re
                        dre = sq_re - mu_re
                        dim = sq_im - mu_im
                        if dre * dre + dim * dim <= tau * tau:
                            fail = 1
                q[tail].u_re = a_re; q[tail].u_im = a_im
                q[tail].v_re = fr.g_re; q[tail].v_im = fr.g_im
                q[tail].g_re = t_re; q[tail].g_im = t_im
                q[tail].u_mod = a_m; q[tail].v_mod = gm; q[tail].g_mod = t_m
                tail += 1
        else:
            status = FAILS if fail else CERTIFIED
    finally:
        free(q)
    return (status, nodes, omega2)
