"""Coefficient propagation for the coordinate Bethe ansatz.

An N-particle scattering state is, inside the wedge where the coordinates
are ordered by Q, a sum of plane waves over all momentum assignments P,

    psi(x) = sum_P A_P(Q) exp(i sum_j k_{P(j)} x_{Q(j)}),

so the full state is the table A_P(Q) of N! x N! complex coefficients.
Rows are indexed by P and columns by Q, both in the rank order of
``permutations``.  The contact conditions tie the four coefficients
A_P(Q), A_P(Q T_i), A_{P T_i}(Q), A_{P T_i}(Q T_i) together whenever
Q(i) < Q(i+1):

    A_{P T_i}(Q)     = S_R^+(u) A_P(Q)     + S_T^-(u) A_P(Q T_i)
    A_{P T_i}(Q T_i) = S_R^-(u) A_P(Q T_i) + S_T^+(u) A_P(Q)

with u = k_{P(i)} - k_{P(i+1)}.  Packing the Q index into a vector A_P
turns this into A_{P T_i} = Y_i(u) A_P where Y_i(u) has exactly two
entries per row.  ``propagate`` walks a transposition word for P applying
one Y step at a time, tracking the partial product so each step uses the
momentum difference seen by the particles actually being exchanged.  The
result is word-independent exactly for the integrable coupling families;
for N >= 3 and other couplings ``propagate`` refuses rather than return
an answer that depends on bookkeeping.

``coefficients_bc_oracle`` is the brute-force cross-check: it assembles
every contact condition as one big linear system over all N!^2 unknowns,
pins the A_P(identity wedge) column, and solves by least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .couplings import CouplingParameters, integrable_family
from .errors import NotIntegrable
from .permutations import Permutation, SymmetricGroupTables, decompose, symmetric_group
from .scattering import amplitudes

MIN_MOMENTUM_GAP = 1e-12
INTEGRABILITY_TOL = 1e-9


def validate_momenta(k) -> np.ndarray:
    """Momenta as a float array; requires pairwise gaps above 1e-12."""
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    if k.ndim != 1 or k.size < 1:
        raise ValueError("momenta must be a 1D array with at least one entry")
    n = k.size
    for a in range(n):
        for b in range(a + 1, n):
            if abs(k[a] - k[b]) <= MIN_MOMENTUM_GAP:
                raise ValueError(f"momenta k[{a}]={k[a]} and k[{b}]={k[b]} coincide")
    return k


@dataclass(frozen=True)
class YangMatrix:
    """Dense N! x N! single-step propagation matrix Y_i(u)."""

    n_particles: int
    site: int
    u: float
    matrix: np.ndarray


def yang_parts(params: CouplingParameters, n: int, i: int, u: float):
    """Sparse form of Y_i(u): (diagonal, off-diagonal, column map).

    Row Q holds ``diag[q]`` at column Q and ``off[q]`` at column
    ``tmap[q]`` = rank index of Q T_i; all other entries vanish.  Applying
    Y from the left is O(N!) per vector column, against O(N!^2) for the
    dense form.
    """
    if not 1 <= i < n:
        raise ValueError(f"site {i} out of range for N={n}")
    tables = symmetric_group(n)
    amp = amplitudes(params, u)
    asc = tables.asc[i - 1]
    diag = np.where(asc, amp.s_r_plus, amp.s_r_minus)
    off = np.where(asc, amp.s_t_minus, amp.s_t_plus)
    return diag, off, tables.tmaps[i - 1]


def yang_apply(parts, target: np.ndarray) -> np.ndarray:
    """Left-multiply the sparse Y given by ``parts`` onto a vector or matrix."""
    diag, off, tmap = parts
    if target.ndim == 1:
        return diag * target + off * target[tmap]
    return diag[:, np.newaxis] * target + off[:, np.newaxis] * target[tmap]


def build_yang_matrix(params: CouplingParameters, n: int, i: int, u: float) -> YangMatrix:
    """Y_i(u) built directly from the pairwise coefficient relations.

    Row Q carries S_R^+(u) on the diagonal and S_T^-(u) at column Q T_i
    when Q(i) < Q(i+1), and S_R^-(u) / S_T^+(u) otherwise.
    """
    diag, off, tmap = yang_parts(params, n, i, u)
    order = diag.shape[0]
    mat = np.zeros((order, order), dtype=np.complex128)
    rows = np.arange(order)
    mat[rows, rows] = diag
    mat[rows, tmap] = off
    return YangMatrix(n_particles=n, site=i, u=float(u), matrix=mat)


def build_s_diagonals_periodic(params: CouplingParameters, n: int, i: int, u: float):
    """The diagonals of S_R^i and S_T^i from their closed index pattern.

    Within each period of length (i+1)!, position j = n'*i! + k (1-based,
    1 <= k <= i!) takes the (S_R^-, S_T^+) pair when k <= n'*(i-1)! and
    the (S_R^+, S_T^-) pair otherwise.  Serves as a cross-check against
    the direct construction in ``build_yang_matrix``.
    """
    if not 1 <= i < n:
        raise ValueError(f"site {i} out of range for N={n}")
    amp = amplitudes(params, u)
    order = math.factorial(n)
    period = math.factorial(i + 1)
    fact_i = math.factorial(i)
    fact_im1 = math.factorial(i - 1)
    s_r = np.empty(order, dtype=np.complex128)
    s_t = np.empty(order, dtype=np.complex128)
    for j0 in range(order):
        j = j0 % period + 1
        n_digit = (j - 1) // fact_i
        k_digit = j - n_digit * fact_i
        if 1 <= k_digit <= n_digit * fact_im1:
            s_r[j0] = amp.s_r_minus
            s_t[j0] = amp.s_t_plus
        else:
            s_r[j0] = amp.s_r_plus
            s_t[j0] = amp.s_t_minus
    return s_r, s_t


def _check_propagation_allowed(params: CouplingParameters, n: int, tol: float) -> None:
    # N = 2 admits no alternative reduced words, so any couplings are safe;
    # the word-independence question only arises from N = 3 up.
    if n >= 3 and integrable_family(params, tol) is None:
        raise NotIntegrable(
            f"couplings {params.astuple()} are outside both integrable families"
        )


def _apply_step(a, tables, site0, srp, srm, stp, stm, ka, kb):
    asc = tables.asc[site0]
    diag = np.where(asc, srp[ka, kb], srm[ka, kb])
    off = np.where(asc, stm[ka, kb], stp[ka, kb])
    return diag * a + off * a[tables.tmaps[site0]]


def propagate(params: CouplingParameters, k, a_identity, p: Permutation,
              word: list[int] | None = None, tol: float = INTEGRABILITY_TOL) -> np.ndarray:
    """Coefficient vector A_P from A_I by stepping along a word for P.

    ``word`` defaults to the canonical decomposition of p; any word whose
    product is p gives the same result for integrable couplings.  Raises
    NotIntegrable for N >= 3 couplings outside the two families and
    PoleAtU if a needed amplitude is singular.
    """
    k = validate_momenta(k)
    n = k.size
    if p.n != n:
        raise ValueError(f"permutation size {p.n} != number of momenta {n}")
    _check_propagation_allowed(params, n, tol)
    tables = symmetric_group(n)
    a = np.asarray(a_identity, dtype=np.complex128)
    if a.shape != (tables.order,):
        raise ValueError(f"coefficient vector must have length {tables.order}")
    if word is None:
        word = decompose(p)
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(params, k)
    run = np.arange(n)
    a = a.copy()
    for i in word:
        s = i - 1
        a = _apply_step(a, tables, s, srp, srm, stp, stm, run[s], run[s + 1])
        run[s], run[s + 1] = run[s + 1], run[s]
    if tuple(run + 1) != p.images:
        raise ValueError(f"word {word} does not multiply out to {p.images}")
    return a


@dataclass(frozen=True)
class BetheState:
    """Momenta, couplings and the full coefficient table A_P(Q).

    ``table[p, q]`` is A_P(Q) with both indices 0-based in rank order.
    """

    params: CouplingParameters
    k: np.ndarray
    table: np.ndarray

    @property
    def n(self) -> int:
        return self.k.size

    @property
    def energy(self) -> float:
        return float(np.sum(self.k**2))

    @cached_property
    def tables(self) -> SymmetricGroupTables:
        return symmetric_group(self.n)


def bethe_state(params: CouplingParameters, k, a_identity,
                tol: float = INTEGRABILITY_TOL) -> BetheState:
    """Build the full table by propagating A_I to every P in rank order."""
    k = validate_momenta(k)
    n = k.size
    _check_propagation_allowed(params, n, tol)
    tables = symmetric_group(n)
    a = np.asarray(a_identity, dtype=np.complex128)
    if a.shape != (tables.order,):
        raise ValueError(f"coefficient vector must have length {tables.order}")
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(params, k)
    table = _kernels.propagate_table(
        np.ascontiguousarray(a),
        tables.decomp_flat, tables.decomp_offsets,
        tables.tmaps, tables.asc, srp, srm, stp, stm,
    )
    return BetheState(params=params, k=k, table=table)


def state_relation_residual(state: BetheState) -> float:
    """Max violation of the pairwise coefficient relations over the table.

    Zero (to roundoff) for any table produced by ``bethe_state``;
    sensitive to corruption of any single entry.
    """
    tables = state.tables
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(state.params, state.k)
    worst = 0.0
    for i in range(1, state.n):
        s = i - 1
        asc = tables.asc[s]
        tmap = tables.tmaps[s]
        for p_idx, p in enumerate(tables.perms):
            pt_idx = tables.index[p.right_t(i).images]
            ka, kb = p(i) - 1, p(i + 1) - 1
            a_p = state.table[p_idx]
            a_pt = state.table[pt_idx]
            r1 = a_pt[asc] - srp[ka, kb] * a_p[asc] - stm[ka, kb] * a_p[tmap[asc]]
            r2 = a_pt[tmap[asc]] - srm[ka, kb] * a_p[tmap[asc]] - stp[ka, kb] * a_p[asc]
            worst = max(worst, np.abs(r1).max(), np.abs(r2).max())
    return worst


@dataclass(frozen=True)
class OracleResult:
    """Least-squares solution of the full contact-condition system."""

    table: np.ndarray
    residual: float          # max |equation violation| at the solution
    nullity: int             # dimension of the homogeneous solution space
    expected_nullity: int    # N! when the ansatz is consistent

    @property
    def rank_deficient(self) -> bool:
        return self.nullity != self.expected_nullity


def coefficients_bc_oracle(params: CouplingParameters, k, pinned_column) -> OracleResult:
    """Solve the full boundary system with A_P(identity wedge) pinned.

    Assembles, for every site i, every wedge Q with Q(i) < Q(i+1) and
    every P, the two contact conditions in the four coefficients they
    couple, appends the N! pins A_P(I) = pinned_column[rank(P)], and
    solves the stacked system by least squares.  The equation residual is
    at roundoff exactly when the couplings are integrable (or N = 2).

    Limited to N <= 4: the system has (N-1) N!^2 rows.
    """
    k = validate_momenta(k)
    n = k.size
    if n > 4:
        raise ValueError("brute-force oracle is limited to N <= 4")
    c, lam, gamma, eta = params.astuple()
    tables = symmetric_group(n)
    f = tables.order
    pinned_column = np.asarray(pinned_column, dtype=np.complex128)
    if pinned_column.shape != (f,):
        raise ValueError(f"pinned column must have length {f}")

    n_eq = (n - 1) * f * f // 2 * 2 + f
    mat = np.zeros((n_eq, f * f), dtype=np.complex128)
    rhs = np.zeros(n_eq, dtype=np.complex128)
    row = 0
    for i in range(1, n):
        s = i - 1
        for q_idx in range(f):
            if not tables.asc[s, q_idx]:
                continue
            qt_idx = tables.tmaps[s, q_idx]
            for p_idx, p in enumerate(tables.perms):
                pt_idx = tables.index[p.right_t(i).images]
                u = k[p(i) - 1] - k[p(i + 1) - 1]
                iu = 1j * u
                g = (1j * gamma + eta) * u
                lu = 1j * lam * u
                ge = gamma + 1j * eta
                # derivative-jump condition
                mat[row, pt_idx * f + qt_idx] = iu - c + g
                mat[row, p_idx * f + qt_idx] = -iu - c - g
                mat[row, p_idx * f + q_idx] = -iu - c + g
                mat[row, pt_idx * f + q_idx] = iu - c - g
                row += 1
                # value-jump condition
                mat[row, p_idx * f + qt_idx] = 1 + lu - ge
                mat[row, pt_idx * f + qt_idx] = 1 - lu - ge
                mat[row, p_idx * f + q_idx] = -1 - lu - ge
                mat[row, pt_idx * f + q_idx] = -1 + lu - ge
                row += 1
    homogeneous_rows = row
    for p_idx in range(f):
        mat[row, p_idx * f + 0] = 1.0
        rhs[row] = pinned_column[p_idx]
        row += 1
    assert row == n_eq

    solution, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    residual = float(np.abs(mat @ solution - rhs).max())
    rank = np.linalg.matrix_rank(mat[:homogeneous_rows])
    return OracleResult(
        table=solution.reshape(f, f),
        residual=residual,
        nullity=f * f - int(rank),
        expected_nullity=f,
    )
