"""Two-body scattering amplitudes for the general point interaction.

For relative momentum u = k1 - k2 the transmission and reflection
amplitudes have the closed form

    S_T^+(u) = (gamma^2 + eta^2 - 2i eta + c lam - 1) u / D(u)
    S_R^+(u) = (i lam u^2 + 2 gamma u + i c) / D(u)
    D(u)     = i lam u^2 - (gamma^2 + eta^2 + c lam + 1) u - i c

and the minus amplitudes are the same expressions with
(gamma, eta) -> (-gamma, -eta); they describe scattering with the two
particles' roles exchanged.  ``amplitudes_bvp_oracle`` rederives the same
numbers by substituting the two-particle plane-wave ansatz into the contact
boundary conditions and solving the resulting 2x2 linear system; it shares
no algebra with the closed form and is used to validate it.

For real u the denominator can only vanish at u = 0 with c = 0; bound-state
poles sit at complex u and are out of scope, but a guard band around any
small denominator raises PoleAtU rather than returning garbage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .couplings import CouplingParameters
from .errors import PoleAtU, SingularSystem

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class AmplitudeSet:
    """The four two-body amplitudes at relative momentum u."""

    s_t_plus: complex
    s_r_plus: complex
    s_t_minus: complex
    s_r_minus: complex
    u: float


def _closed_form(c: float, lam: float, gamma: float, eta: float, u: float):
    den = 1j * lam * u * u - (gamma * gamma + eta * eta + c * lam + 1.0) * u - 1j * c
    if abs(den) <= POLE_GUARD * max(1.0, u * u):
        raise PoleAtU(f"amplitude denominator {den:.3e} at u={u}")
    s_t = (gamma * gamma + eta * eta - 2j * eta + c * lam - 1.0) * u / den
    s_r = (1j * lam * u * u + 2.0 * gamma * u + 1j * c) / den
    return s_t, s_r


def amplitudes(params: CouplingParameters, u: float) -> AmplitudeSet:
    """Closed-form amplitudes at relative momentum u.

    Raises PoleAtU when the denominator falls inside the guard band.
    """
    c, lam, gamma, eta = params.astuple()
    s_t_plus, s_r_plus = _closed_form(c, lam, gamma, eta, u)
    s_t_minus, s_r_minus = _closed_form(c, lam, -gamma, -eta, u)
    return AmplitudeSet(s_t_plus, s_r_plus, s_t_minus, s_r_minus, float(u))


def _solve_bc_system(c, lam, gamma, eta, k1, k2):
    """Solve the two contact boundary conditions for (S_T, S_R).

    The ansatz is exp(i k1 x1 + i k2 x2) + S_R exp(i k2 x1 + i k1 x2) for
    x1 < x2 and S_T exp(i k1 x1 + i k2 x2) for x2 < x1.  Both conditions are
    linear in (S_T, S_R); the linear map is extracted by evaluating the
    residuals at (0,0), (1,0), (0,1) so the construction stays independent
    of the closed form.
    """
    u = k1 - k2
    x0 = 0.37  # arbitrary point on the contact line; the common phase drops out

    def residuals(s_t, s_r):
        ph = np.exp(1j * (k1 + k2) * x0)
        v_minus = ph * (1 + s_r)
        d_minus = ph * 1j * u * (1 - s_r)
        v_plus = ph * s_t
        d_plus = ph * 1j * u * s_t
        v_avg = 0.5 * (v_plus + v_minus)
        d_avg = 0.5 * (d_plus + d_minus)
        r1 = (d_plus - d_minus) - 2 * c * v_avg + 2 * (gamma - 1j * eta) * d_avg
        r2 = (v_plus - v_minus) - 2 * lam * d_avg - 2 * (gamma + 1j * eta) * v_avg
        return np.array([r1, r2])

    r00 = residuals(0.0, 0.0)
    mat = np.column_stack([residuals(1.0, 0.0) - r00, residuals(0.0, 1.0) - r00])
    if abs(np.linalg.det(mat)) <= 1e-12 * max(1.0, u * u):
        raise SingularSystem(f"boundary system singular at k1={k1}, k2={k2}")
    s_t, s_r = np.linalg.solve(mat, -r00)
    return complex(s_t), complex(s_r)


def amplitudes_bvp_oracle(params: CouplingParameters, k1: float, k2: float) -> AmplitudeSet:
    """Amplitudes from a direct boundary-value solve (validation oracle).

    Requires k1 != k2.  The minus amplitudes come from re-solving with
    (gamma, eta) flipped, which corresponds to exchanging the two particles.
    """
    if k1 == k2:
        raise ValueError("oracle needs distinct momenta k1 != k2")
    c, lam, gamma, eta = params.astuple()
    s_t_plus, s_r_plus = _solve_bc_system(c, lam, gamma, eta, k1, k2)
    s_t_minus, s_r_minus = _solve_bc_system(c, lam, -gamma, -eta, k1, k2)
    return AmplitudeSet(s_t_plus, s_r_plus, s_t_minus, s_r_minus, float(k1 - k2))
