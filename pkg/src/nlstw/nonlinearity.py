"""Nonlinearities F, potentials V, the saturating cutoff phi and the split W.

A model must satisfy F(r0^2) = 0 with F'(r0^2) < 0; the derived constants
are a = sqrt(-F'(r0^2)/2) and the sound speed v_s = 2*a*r0. Traveling waves
are sought at speeds 0 < c < v_s.
"""

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq


class ModelInvalidError(ValueError):
    """F has no admissible root (positive root with negative slope)."""


class OutOfDomainError(ValueError):
    """Tabulated nonlinearity queried outside its sample range."""


class NonlinearityModel:
    """Base class; concrete models implement f/f_prime/v.

    Attributes r0, a, a2 (= a^2 kept exact), v_s and the optional growth
    exponent p0 are fixed at construction.
    """

    kind = "abstract"

    def __init__(self, r0, fprime_at_root, p0=None):
        if not r0 > 0:
            raise ModelInvalidError("r0 must be positive")
        if not fprime_at_root < 0:
            raise ModelInvalidError("F'(r0^2) must be negative")
        self.r0 = float(r0)
        self.a2 = -0.5 * float(fprime_at_root)
        self.a = float(np.sqrt(self.a2))
        self.v_s = 2.0 * self.a * self.r0
        self.p0 = p0

    def f(self, s):
        raise NotImplementedError

    def f_prime(self, s):
        raise NotImplementedError

    def v(self, s):
        raise NotImplementedError

    def validate(self, tol=1e-12):
        """Numerical (A1) check: F(r0^2) ~ 0 and centered-difference slope < 0."""
        s0 = self.r0 ** 2
        if abs(float(self.f(s0))) > tol:
            raise ModelInvalidError("F(r0^2) = %g exceeds %g" % (self.f(s0), tol))
        d = 1e-6 * s0
        slope = (float(self.f(s0 + d)) - float(self.f(s0 - d))) / (2 * d)
        if not slope < 0:
            raise ModelInvalidError("centered difference of F at r0^2 is %g >= 0" % slope)
        return self


class GrossPitaevskii(NonlinearityModel):
    """F(s) = 1 - s, r0 = 1, V(s) = (1-s)^2 / 2."""

    kind = "gp"

    def __init__(self):
        super().__init__(r0=1.0, fprime_at_root=-1.0, p0=1.0)

    def f(self, s):
        return 1.0 - np.asarray(s, dtype=np.float64)

    def f_prime(self, s):
        return np.full_like(np.asarray(s, dtype=np.float64), -1.0)

    def v(self, s):
        s = np.asarray(s, dtype=np.float64)
        return 0.5 * (1.0 - s) ** 2


class CubicQuintic(NonlinearityModel):
    """F(s) = -a1 + a3 s - a5 s^2 with positive coefficients.

    r0^2 is the larger positive root of F (the one with F' < 0).
    """

    kind = "cubic-quintic"

    def __init__(self, alpha1, alpha3, alpha5):
        if not (alpha1 > 0 and alpha3 > 0 and alpha5 > 0):
            raise ModelInvalidError("cubic-quintic coefficients must be positive")
        self.alpha1 = float(alpha1)
        self.alpha3 = float(alpha3)
        self.alpha5 = float(alpha5)
        disc = self.alpha3 ** 2 - 4.0 * self.alpha1 * self.alpha5
        if disc <= 0:
            raise ModelInvalidError("F has no two positive roots (discriminant <= 0)")
        s_root = (self.alpha3 + np.sqrt(disc)) / (2.0 * self.alpha5)
        fp = self.alpha3 - 2.0 * self.alpha5 * s_root
        super().__init__(r0=np.sqrt(s_root), fprime_at_root=fp, p0=2.0)

    def f(self, s):
        s = np.asarray(s, dtype=np.float64)
        return -self.alpha1 + self.alpha3 * s - self.alpha5 * s ** 2

    def f_prime(self, s):
        s = np.asarray(s, dtype=np.float64)
        return self.alpha3 - 2.0 * self.alpha5 * s

    def v(self, s):
        # V(s) = int_s^{r0^2} F = Fa(r0^2) - Fa(s), Fa the antiderivative
        s = np.asarray(s, dtype=np.float64)
        s0 = self.r0 ** 2

        def fa(t):
            return -self.alpha1 * t + self.alpha3 * t ** 2 / 2.0 - self.alpha5 * t ** 3 / 3.0

        return fa(s0) - fa(s)


class Tabulated(NonlinearityModel):
    """Monotone-cubic (PCHIP) interpolation of (s, F(s)) samples.

    Queries outside the sample range raise OutOfDomainError. V is the exact
    integral of the interpolant (well within the 1e-10 quadrature budget).
    """

    kind = "tabulated"

    def __init__(self, s_samples, f_samples, p0=None):
        s = np.asarray(s_samples, dtype=np.float64)
        fv = np.asarray(f_samples, dtype=np.float64)
        if s.ndim != 1 or s.size < 4 or s.shape != fv.shape:
            raise ModelInvalidError("need >= 4 matching (s, F) samples")
        order = np.argsort(s)
        self.s_min = float(s[order][0])
        self.s_max = float(s[order][-1])
        self._interp = PchipInterpolator(s[order], fv[order])
        self._deriv = self._interp.derivative()
        self._anti = self._interp.antiderivative()
        r0sq = self._find_root()
        super().__init__(r0=np.sqrt(r0sq), fprime_at_root=float(self._deriv(r0sq)), p0=p0)

    def _find_root(self):
        interp, deriv = self._interp, self._deriv
        xs = np.linspace(self.s_min, self.s_max, 2048)
        ys = interp(xs)
        roots = []
        for i in range(len(xs) - 1):
            if ys[i] == 0.0 and deriv(xs[i]) < 0 and xs[i] > 0:
                roots.append(xs[i])
            elif ys[i] * ys[i + 1] < 0:
                r = brentq(interp, xs[i], xs[i + 1], xtol=1e-14)
                if r > 0 and deriv(r) < 0:
                    roots.append(r)
        if not roots:
            raise ModelInvalidError("tabulated F has no positive root with F' < 0")
        return max(roots)

    def _check_domain(self, s):
        s = np.asarray(s, dtype=np.float64)
        if np.any(s < self.s_min) or np.any(s > self.s_max):
            raise OutOfDomainError(
                "query outside tabulated range [%g, %g]" % (self.s_min, self.s_max))
        return s

    def f(self, s):
        return self._interp(self._check_domain(s))

    def f_prime(self, s):
        return self._deriv(self._check_domain(s))

    def v(self, s):
        s = self._check_domain(s)
        return self._anti(self.r0 ** 2) - self._anti(s)

    def v_quad(self, s, tol=1e-10):
        """Adaptive-quadrature V for cross-checking the antiderivative."""
        val, _ = quad(self._interp, float(s), self.r0 ** 2, epsabs=tol, limit=200)
        return val


def f_eval(model, s):
    if np.any(np.asarray(s) < 0):
        raise ValueError("F is defined for s >= 0")
    return model.f(s)


def v_eval(model, s):
    if np.any(np.asarray(s) < 0):
        raise ValueError("V is defined for s >= 0")
    return model.v(s)


def derived_constants(model):
    """(r0, a, v_s); v_s = 2*a*r0 holds by construction."""
    return model.r0, model.a, model.v_s


class CutoffPhi:
    """Odd saturating cutoff: identity on [0, 2 r0], C^1 cubic Hermite bridge
    on [2 r0, 4 r0] (slope exactly 1 - t on the unit parameter, hence within
    [0, 1]), constant 3 r0 beyond.

    construction_id tags this choice in the field-file header so stored
    energies are reproducible.
    """

    construction_id = 1

    def __init__(self, r0):
        if not r0 > 0:
            raise ValueError("r0 must be positive")
        self.r0 = float(r0)

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        r0 = self.r0
        ab = np.abs(s)
        t = np.clip((ab - 2.0 * r0) / (2.0 * r0), 0.0, 1.0)
        bridge = 2.0 * r0 * (1.0 + t - 0.5 * t * t)
        out = np.where(ab <= 2.0 * r0, ab, bridge)
        return np.sign(s) * out

    def prime(self, s):
        s = np.asarray(s, dtype=np.float64)
        r0 = self.r0
        ab = np.abs(s)
        t = (ab - 2.0 * r0) / (2.0 * r0)
        out = np.where(ab <= 2.0 * r0, 1.0, np.where(ab >= 4.0 * r0, 0.0, 1.0 - t))
        return out


def w_split(model, phi, s):
    """W(s) = V(s) - V(phi(sqrt(s))^2); vanishes on [0, 4 r0^2]."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("W is defined for s >= 0")
    return model.v(s) - model.v(phi(np.sqrt(s)) ** 2)
