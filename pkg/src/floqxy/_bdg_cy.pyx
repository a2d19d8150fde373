# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the one-period BdG integration.

Same Dormand-Prince 5(4) scheme and error-per-unit-step control as the
numpy twin in ``_bdg_np.py``, but with an independent adaptive step per
mode, which is the natural layout for a scalar loop and saves work on the
easy modes.  Both backends must stay below the same defect budget.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fmin, fmax, pow

cnp.import_array()

ctypedef double complex dcomplex

cdef extern from "complex.h" nogil:
    double cabs(double complex)


cdef inline void _rhs(double t, dcomplex a, dcomplex b, double dz0,
                      double ddrive, double omega, double dx,
                      dcomplex *da, dcomplex *db) nogil:
    cdef double dz = dz0 + ddrive * sin(omega * t)
    da[0] = 1j * (dz * a + dx * b)
    db[0] = 1j * (dx * a - dz * b)


def integrate_columns(k, double gamma, double h0, double dh, double omega,
                      double t_end, double tol):
    """First monodromy column (a_k, b_k) at t_end for every mode."""
    cdef cnp.ndarray[double, ndim=1] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t M = kk.shape[0]
    cdef cnp.ndarray[dcomplex, ndim=2] out = np.zeros((M, 2), dtype=np.complex128)

    if t_end == 0.0:
        out[:, 0] = 1.0
        return out, {"steps": 0, "rejected": 0, "defect": 0.0}

    cdef double ddrive = 2.0 * dh
    cdef Py_ssize_t m
    cdef double dz0, dx, t, h, err, budget, factor, nrm, defect = 0.0
    cdef long steps_max = 0, rejected = 0, steps
    cdef dcomplex a, b, a2, b2, anew, bnew
    cdef dcomplex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, k5a, k5b, k6a, k6b, k7a, k7b
    cdef dcomplex ea, eb
    cdef bint failed = 0

    # Dormand-Prince 5(4) coefficients
    cdef double C2 = 1.0/5, C3 = 3.0/10, C4 = 4.0/5, C5 = 8.0/9
    cdef double A21 = 1.0/5
    cdef double A31 = 3.0/40, A32 = 9.0/40
    cdef double A41 = 44.0/45, A42 = -56.0/15, A43 = 32.0/9
    cdef double A51 = 19372.0/6561, A52 = -25360.0/2187, A53 = 64448.0/6561, A54 = -212.0/729
    cdef double A61 = 9017.0/3168, A62 = -355.0/33, A63 = 46732.0/5247, A64 = 49.0/176, A65 = -5103.0/18656
    cdef double B1 = 35.0/384, B3 = 500.0/1113, B4 = 125.0/192, B5 = -2187.0/6784, B6 = 11.0/84
    cdef double E1 = 71.0/57600, E3 = -71.0/16695, E4 = 71.0/1920
    cdef double E5 = -17253.0/339200, E6 = 22.0/525, E7 = -1.0/40

    with nogil:
        for m in range(M):
            dz0 = 2.0 * (h0 - cos(kk[m]))
            dx = 2.0 * gamma * sin(kk[m])
            a = 1.0
            b = 0.0
            t = 0.0
            h = t_end / 200.0
            steps = 0
            _rhs(t, a, b, dz0, ddrive, omega, dx, &k1a, &k1b)
            while t < t_end:
                h = fmin(h, t_end - t)
                if h < 1e-13 * t_end or steps > 10000000:
                    failed = 1
                    break
                a2 = a + h * (A21 * k1a)
                b2 = b + h * (A21 * k1b)
                _rhs(t + C2 * h, a2, b2, dz0, ddrive, omega, dx, &k2a, &k2b)
                a2 = a + h * (A31 * k1a + A32 * k2a)
                b2 = b + h * (A31 * k1b + A32 * k2b)
                _rhs(t + C3 * h, a2, b2, dz0, ddrive, omega, dx, &k3a, &k3b)
                a2 = a + h * (A41 * k1a + A42 * k2a + A43 * k3a)
                b2 = b + h * (A41 * k1b + A42 * k2b + A43 * k3b)
                _rhs(t + C4 * h, a2, b2, dz0, ddrive, omega, dx, &k4a, &k4b)
                a2 = a + h * (A51 * k1a + A52 * k2a + A53 * k3a + A54 * k4a)
                b2 = b + h * (A51 * k1b + A52 * k2b + A53 * k3b + A54 * k4b)
                _rhs(t + C5 * h, a2, b2, dz0, ddrive, omega, dx, &k5a, &k5b)
                a2 = a + h * (A61 * k1a + A62 * k2a + A63 * k3a + A64 * k4a + A65 * k5a)
                b2 = b + h * (A61 * k1b + A62 * k2b + A63 * k3b + A64 * k4b + A65 * k5b)
                _rhs(t + h, a2, b2, dz0, ddrive, omega, dx, &k6a, &k6b)
                anew = a + h * (B1 * k1a + B3 * k3a + B4 * k4a + B5 * k5a + B6 * k6a)
                bnew = b + h * (B1 * k1b + B3 * k3b + B4 * k4b + B5 * k5b + B6 * k6b)
                _rhs(t + h, anew, bnew, dz0, ddrive, omega, dx, &k7a, &k7b)

                ea = h * (E1 * k1a + E3 * k3a + E4 * k4a + E5 * k5a + E6 * k6a + E7 * k7a)
                eb = h * (E1 * k1b + E3 * k3b + E4 * k4b + E5 * k5b + E6 * k6b + E7 * k7b)
                err = fmax(cabs(ea), cabs(eb))
                budget = tol * h / t_end

                if err <= budget:
                    t += h
                    a = anew
                    b = bnew
                    k1a = k7a
                    k1b = k7b
                    steps += 1
                    factor = 5.0 if err == 0.0 else fmin(5.0, 0.9 * pow(budget / err, 0.2))
                    h *= fmax(factor, 0.2)
                else:
                    rejected += 1
                    h *= fmax(0.2, 0.9 * pow(budget / err, 0.2))
            if failed:
                break
            out[m, 0] = a
            out[m, 1] = b
            if steps > steps_max:
                steps_max = steps
            nrm = cabs(a) * cabs(a) + cabs(b) * cabs(b)
            if nrm - 1.0 > defect or 1.0 - nrm > defect:
                defect = nrm - 1.0 if nrm > 1.0 else 1.0 - nrm

    if failed:
        from ._bdg_np import IntegrationError
        raise IntegrationError(f"step size underflow (tol={tol:g})")
    return np.asarray(out), {"steps": int(steps_max), "rejected": int(rejected),
                             "defect": float(defect)}
