"""Randomized numeric cross-check of structural verdicts.

Perturbing a single entry of [A, b] by t makes det C(A, b) a polynomial
q(t). For a generic realization the system is perturbation-sensitive in that
entry exactly when q is nonconstant; any root t* then gives an uncontrollable
perturbed system. q is recovered by sampling on roots of unity.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .structural import is_structurally_controllable
from .structured import PerturbationEdge, PerturbedStructuredSystem, StructuredMatrix

__all__ = [
    "NumericConfig",
    "NumericRealization",
    "UnivariatePoly",
    "InterpolationError",
    "SingularPencilError",
    "sample_realization",
    "controllability_matrix",
    "numeric_rank",
    "numeric_controllable",
    "interpolate_on_circle",
    "Witness",
    "EntryAnalysis",
    "psc_witness_single_entry",
    "OracleVerdict",
    "oracle_verdict",
    "count_nonzero_roots_numeric",
    "sample_matrix",
]

RANK_TOL_ENV = "PTSC_RANK_TOL"


def _default_rank_tol() -> float:
    return float(os.environ.get(RANK_TOL_ENV, "1e-10"))


@dataclass(frozen=True)
class NumericConfig:
    magnitude: tuple[float, float] = (1.0, 2.0)
    rank_tol: float = field(default_factory=_default_rank_tol)
    nonconstant_tol: float = 1e-8
    selfcheck_tol: float = 1e-6
    zero_root_tol: float = 1e-8
    # a witness is accepted when sigma_min([A - lam I, b]) is this small,
    # relative to the largest singular value
    witness_tol: float = 1e-7
    radius: float = 1.0


DEFAULT = NumericConfig()


class InterpolationError(RuntimeError):
    pass


class SingularPencilError(ValueError):
    pass


@dataclass(frozen=True)
class NumericRealization:
    A: np.ndarray
    b: np.ndarray
    seed: object = None
    field: str = "real"

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def H(self) -> np.ndarray:
        return np.column_stack([self.A, self.b])


def _draw(rng: np.random.Generator, count: int, field: str, magnitude) -> np.ndarray:
    lo, hi = magnitude
    mag = rng.uniform(lo, hi, size=count)
    if field == "real":
        return mag * rng.choice([-1.0, 1.0], size=count)
    if field == "complex":
        return mag * np.exp(2j * np.pi * rng.uniform(size=count))
    raise ValueError(f"unknown field {field!r}")


def sample_matrix(
    m_bar: StructuredMatrix, seed=None, field: str = "real", config: NumericConfig = DEFAULT
) -> np.ndarray:
    """Random realization of an arbitrary pattern, every star nonzero."""
    rng = np.random.default_rng(seed)
    out = np.zeros(m_bar.shape, dtype=float if field == "real" else complex)
    stars = m_bar.sorted_stars()
    for (r, c), x in zip(stars, _draw(rng, len(stars), field, config.magnitude)):
        out[r - 1, c - 1] = x
    return out


def sample_realization(
    a_bar: StructuredMatrix,
    b_bar: StructuredMatrix,
    seed=None,
    field: str = "real",
    config: NumericConfig = DEFAULT,
) -> NumericRealization:
    """Random realization with every star nonzero, |entry| uniform in ``config.magnitude``."""
    rng = np.random.default_rng(seed)
    n = a_bar.rows
    dtype = float if field == "real" else complex
    h = np.zeros((n, n + 1), dtype=dtype)
    stars = sorted(a_bar.stars) + [(r, n + 1) for r, _ in sorted(b_bar.stars)]
    vals = _draw(rng, len(stars), field, config.magnitude)
    for (r, c), x in zip(stars, vals):
        h[r - 1, c - 1] = x
    return NumericRealization(h[:, :n].copy(), h[:, n].copy(), seed, field)


def controllability_matrix(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    b = np.asarray(b).reshape(-1)
    n = A.shape[0]
    if n == 0:
        raise ValueError("empty system")
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError("A must be square and b conformant")
    cols = [b]
    for _ in range(n - 1):
        cols.append(A @ cols[-1])
    return np.column_stack(cols)


def numeric_rank(M: np.ndarray, tol: float | None = None, ref: float = 0.0) -> int:
    """Count singular values above tol * max(sigma_1, ref) * max(M.shape).

    ``ref`` supplies an outside scale, for matrices that may have collapsed
    towards zero as a whole.
    """
    tol = DEFAULT.rank_tol if tol is None else tol
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    top = max(s[0] if s.size else 0.0, ref)
    if top == 0:
        return 0
    return int(np.sum(s > tol * top * max(M.shape)))


def numeric_controllable(A, b, tol: float | None = None) -> bool:
    C = controllability_matrix(A, b)
    return numeric_rank(C, tol) == C.shape[0]


@dataclass(frozen=True)
class UnivariatePoly:
    """Dense complex polynomial, coefficients in ascending degree."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        object.__setattr__(self, "coeffs", c)

    def __call__(self, t):
        return P.polyval(t, self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if np.any(self.coeffs) else -1

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def trimmed(self, rel_tol: float) -> UnivariatePoly:
        """Drop coefficients below rel_tol * max|coeff| (set them to zero)."""
        s = self.scale()
        c = np.where(np.abs(self.coeffs) > rel_tol * s, self.coeffs, 0)
        return UnivariatePoly(c)

    def is_constant(self, rel_tol: float = DEFAULT.nonconstant_tol) -> bool:
        s = self.scale()
        return s == 0 or float(np.max(np.abs(self.coeffs[1:]), initial=0.0)) <= rel_tol * s

    def roots(self) -> np.ndarray:
        # numpy builds the companion matrix and takes its eigenvalues
        return P.polyroots(self.coeffs) if self.degree >= 1 else np.array([], dtype=complex)


def interpolate_on_circle(f, degree_bound: int, radius: float = 1.0) -> UnivariatePoly:
    """Coefficients of a polynomial of degree <= degree_bound from samples on a circle."""
    N = degree_bound + 1
    nodes = radius * np.exp(2j * np.pi * np.arange(N) / N)
    vals = np.array([f(z) for z in nodes], dtype=complex)
    c = np.fft.fft(vals) / N
    c = c / radius ** np.arange(N)
    return UnivariatePoly(c)


def _perturbed(real: NumericRealization, entry, t):
    i, j = entry
    n = real.n
    A = real.A.astype(complex)
    b = real.b.astype(complex)
    if j == n + 1:
        b[i - 1] += t
    else:
        A[i - 1, j - 1] += t
    return A, b


def _pbh_mode(A, b):
    """Candidate mode minimizing sigma_min([A - lam I, b]) (relative).

    Candidates are the eigenvalues of A plus the Rayleigh quotient of the
    left null vector w of C(A, b); the latter stays accurate when the mode
    sits in a Jordan block and eigvals only resolves it to ~eps**(1/m).
    """
    n = A.shape[0]
    best = (np.inf, None)
    scale = np.linalg.norm(np.column_stack([A, b]), 2) or 1.0
    u, _, _ = np.linalg.svd(controllability_matrix(A, b))
    w = u[:, -1].conj()
    candidates = list(np.linalg.eigvals(A)) + [(w @ A @ w.conj()) / (w @ w.conj())]
    for lam in candidates:
        s = np.linalg.svd(np.column_stack([A - lam * np.eye(n), b]), compute_uv=False)[-1]
        if s / scale < best[0]:
            best = (s / scale, lam)
    return best


def _root_candidates(poly: UnivariatePoly, cluster_tol: float = 1e-2) -> list[complex]:
    """Roots with multiple roots merged.

    A root of multiplicity m comes back from the companion matrix as m
    points spread by ~eps**(1/m); their mean, polished by Newton on the
    (m-1)-th derivative, is accurate to ~eps. The raw roots follow as
    fallbacks in case two distinct roots were merged.
    """
    roots = sorted(poly.roots(), key=lambda z: (abs(z), z.real, z.imag))
    clusters: list[list[complex]] = []
    for z in roots:
        for c in clusters:
            if abs(z - c[0]) <= cluster_tol * max(1.0, abs(c[0])):
                c.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for c in clusters:
        z = complex(np.mean(c))
        d = P.polyder(poly.coeffs, len(c) - 1)
        dd = P.polyder(d)
        for _ in range(5):
            den = P.polyval(z, dd)
            if den == 0:
                break
            z -= P.polyval(z, d) / den
        out.append(z)
    out.extend(complex(z) for c in clusters if len(c) > 1 for z in c)
    return out


@dataclass(frozen=True)
class Witness:
    t: complex
    mode: complex
    pbh_residual: float
    ctrb_rank: int


@dataclass(frozen=True)
class EntryAnalysis:
    entry: tuple[int, int]
    poly: UnivariatePoly
    nonconstant: bool
    witness: Witness | None
    selfcheck_error: float


def psc_witness_single_entry(
    real: NumericRealization, entry, config: NumericConfig = DEFAULT
) -> EntryAnalysis:
    """Recover q(t) = det C after adding t to ``entry`` and look for a root.

    Raises :class:`InterpolationError` when q disagrees with a direct
    determinant at an off-grid point; resampling the realization (or the
    radius) usually cures it.
    """
    n = real.n
    i, j = entry
    if not (1 <= i <= n and 1 <= j <= n + 1):
        raise ValueError(f"entry {entry} outside [A, b]")
    if not numeric_controllable(real.A, real.b, config.rank_tol):
        raise ValueError("realization is not controllable at t = 0")

    def q(t):
        return np.linalg.det(controllability_matrix(*_perturbed(real, entry, t)))

    D = n * (n + 1) // 2
    poly = interpolate_on_circle(q, D, config.radius)
    probe = 0.5 * config.radius * np.exp(0.37j)
    direct = q(probe)
    scale = max(abs(direct), poly.scale(), np.finfo(float).tiny)
    err = abs(poly(probe) - direct) / scale
    if err > config.selfcheck_tol:
        raise InterpolationError(
            f"interpolated det C misses a direct evaluation by {err:.2e} (relative); "
            "resample the realization or change the interpolation radius"
        )
    if poly.is_constant(config.nonconstant_tol):
        return EntryAnalysis(tuple(entry), poly, False, None, err)

    witness = None
    ref = np.linalg.norm(controllability_matrix(real.A, real.b), 2)
    for t in _root_candidates(poly.trimmed(config.nonconstant_tol)):
        A, b = _perturbed(real, entry, t)
        resid, lam = _pbh_mode(A, b)
        rank = numeric_rank(controllability_matrix(A, b), config.witness_tol, ref)
        if resid <= config.witness_tol and rank < n:
            witness = Witness(complex(t), complex(lam), float(resid), rank)
            break
    return EntryAnalysis(tuple(entry), poly, True, witness, err)


@dataclass(frozen=True)
class OracleVerdict:
    ptsc_consistent: bool
    witnesses: dict[tuple[int, int], Witness] = field(default_factory=dict)
    analyses: tuple[EntryAnalysis, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def pssc(self) -> bool:
        return not self.ptsc_consistent


def oracle_verdict(
    sys: PerturbedStructuredSystem,
    trials: int = 3,
    seed: int = 0,
    config: NumericConfig = DEFAULT,
    max_resamples: int = 5,
) -> OracleVerdict:
    """PSSC if some perturbed entry admits a verified root in some trial."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not is_structurally_controllable(sys.a_bar, sys.b_bar).ok:
        raise ValueError("oracle requires a structurally controllable system")
    witnesses: dict[tuple[int, int], Witness] = {}
    analyses: list[EntryAnalysis] = []
    notes: list[str] = []
    for e_idx, edge in enumerate(sys.edges):
        folded = sys.fold(edge)
        for trial in range(trials):
            res = None
            for attempt in range(max_resamples):
                ss = np.random.SeedSequence([seed, e_idx, trial, attempt])
                real = sample_realization(folded.a_bar, folded.b_bar, ss, "real", config)
                try:
                    res = psc_witness_single_entry(real, edge, config)
                    break
                except (ValueError, InterpolationError) as exc:
                    notes.append(f"entry {tuple(edge)} trial {trial}: resampled ({exc})")
            if res is None:
                notes.append(f"entry {tuple(edge)} trial {trial}: no usable realization")
                continue
            analyses.append(res)
            if res.nonconstant and res.witness is None:
                notes.append(f"entry {tuple(edge)} trial {trial}: nonconstant q but no verified root")
            if res.witness is not None and tuple(edge) not in witnesses:
                witnesses[tuple(edge)] = res.witness
    return OracleVerdict(not witnesses, witnesses, tuple(analyses), tuple(notes))


def count_nonzero_roots_numeric(
    M: np.ndarray, E: np.ndarray, config: NumericConfig = DEFAULT
) -> int:
    """Number of nonzero roots of det(M - lambda E), with multiplicity."""
    M = np.asarray(M)
    E = np.asarray(E)
    if M.shape != E.shape or M.shape[0] != M.shape[1]:
        raise ValueError("M and E must be square and the same size")
    if np.any(E.sum(axis=0) > 1) or np.any(E.sum(axis=1) > 1):
        raise ValueError("E may have at most one 1 per row and per column")
    deg = int(E.sum())
    poly = interpolate_on_circle(lambda z: np.linalg.det(M - z * E), deg, config.radius)
    ref = (np.linalg.norm(M, 2) + np.linalg.norm(E, 2) + 1.0) ** M.shape[0]
    if poly.scale() <= config.rank_tol * ref:
        raise SingularPencilError("det(M - lambda E) vanishes identically; resample M")
    c = poly.trimmed(config.nonconstant_tol).coeffs
    nz = np.flatnonzero(c)
    deflated = UnivariatePoly(c[nz[0] :])
    return int(np.sum(np.abs(deflated.roots()) > config.zero_root_tol))
