"""Integer invariants from correlator traces and from exact twist sweeps.

Winding numbers come from summed principal-branch phase differences around
the closed theta grid (exact integers, no derivative noise). The two
independent oracles solve ground states over twist angles: the
polarization trace on a cylinder/torus, and the discretized
Berry-curvature (plaquette field-strength) sum over the twist torus.
"""

from dataclasses import dataclass

import numpy as np

from .defects import resta_T
from .errors import (
    AmbiguousFitError,
    AmplitudeFloorError,
    DegeneracyError,
    GeometryMismatchError,
    GridTooCoarseError,
    ValidationError,
)
from .evolve import ground_state
from .hamiltonians import build_hofstadter

AMPLITUDE_FLOOR = 1e-12
RELATIVE_GAP_FLOOR = 1e-8
MIN_LINK_MODULUS = 1e-6


@dataclass
class WindingResult:
    winding: int
    max_step: float
    aliased: bool
    min_amplitude: float

    def __int__(self):
        return self.winding


def winding_number(values, amplitude_floor=AMPLITUDE_FLOOR):
    """Winding of arg(values) around a closed uniform grid on [0, 2*pi).

    The grid closes cyclically (last point connects back to the first).
    Step jumps above pi/2 are flagged as potential aliasing but still
    counted; magnitudes at or below the floor are an error.
    """
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 1 or values.size < 8:
        raise ValidationError("winding grid needs at least 8 points on [0, 2*pi)")
    mags = np.abs(values)
    if np.any(mags <= amplitude_floor):
        raise AmplitudeFloorError(
            f"correlator magnitude {mags.min():.3e} at or below floor {amplitude_floor:.1e}"
        )
    args = np.angle(values)
    diffs = np.diff(args, append=args[0])
    # wrap each step to (-pi, pi]
    diffs = np.angle(np.exp(1j * diffs))
    total = diffs.sum() / (2.0 * np.pi)
    winding = int(np.rint(total))
    if abs(total - winding) > 1e-6:
        raise ValidationError(f"phase steps do not close: accumulated {total:.6f} windings")
    max_step = float(np.abs(diffs).max())
    return WindingResult(winding, max_step, max_step > np.pi / 2.0, float(mags.min()))


@dataclass
class FitResult:
    winding: int
    amplitude: complex
    offset: complex
    residual: float
    runner_up: int
    runner_up_residual: float


def fit_depolarized(thetas, values, candidates=range(-3, 4), harmonic_offset=False):
    """Best least-squares fit of a*exp(1i*C*theta) + c over integer C.

    With harmonic_offset the offset gains a first-harmonic term
    c0 + c1*exp(1i*theta), matching an offset that itself rotates. Two
    candidates within 1% relative residual raise an ambiguity error.
    """
    thetas = np.asarray(thetas, dtype=np.float64)
    values = np.asarray(values, dtype=np.complex128)
    candidates = sorted(set(int(c) for c in candidates))
    if len(candidates) < 2:
        raise ValidationError("need at least two winding candidates")
    fits = []
    for c in candidates:
        cols = [np.exp(1j * c * thetas), np.ones_like(thetas, dtype=np.complex128)]
        if harmonic_offset:
            cols.append(np.exp(1j * thetas))
        design = np.stack(cols, axis=1)
        coef, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
        residual = float(np.linalg.norm(design @ coef - values))
        fits.append((residual, c, coef))
    fits.sort(key=lambda t: (t[0], abs(t[1])))
    best, second = fits[0], fits[1]
    scale = max(best[0], float(np.linalg.norm(values)) * 1e-12, 1e-300)
    if (second[0] - best[0]) / scale < 0.01:
        raise AmbiguousFitError(
            f"windings {best[1]} and {second[1]} fit within 1% relative residual",
            candidates=(best[1], second[1]),
        )
    coef = best[2]
    return FitResult(
        winding=best[1],
        amplitude=complex(coef[0]),
        offset=complex(coef[1]),
        residual=best[0],
        runner_up=second[1],
        runner_up_residual=second[0],
    )


def _twist_ground_states(geometry, basis, spec, twists, tol, guess=None):
    """Ground states along a twist path, warm-starting each solve."""
    states = []
    for (tx, ty) in twists:
        op = build_hofstadter(geometry, basis, spec.with_twist(theta_x=tx, theta_y=ty))
        res = ground_state(op, tol=tol, guess=guess)
        gap_scale = max(abs(res.energy), 1.0)
        if res.gap is not None and res.gap < RELATIVE_GAP_FLOOR * gap_scale:
            raise DegeneracyError(
                f"ground state degenerate at twist ({tx:.4f}, {ty:.4f}): gap {res.gap:.3e}"
            )
        guess = res.state.amplitudes
        states.append(res)
    return states


@dataclass
class RestaChernResult:
    winding: int
    thetas: np.ndarray
    values: np.ndarray
    min_gap: float
    diagnostics: WindingResult


def resta_chern(geometry, basis, spec, s, n_points=24, tol=1e-9):
    """Winding of the whole-system polarization trace over x-flux threading."""
    if geometry.boundary == "open":
        raise GeometryMismatchError("polarization winding requires cylinder-x or torus")
    thetas = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    results = _twist_ground_states(geometry, basis, spec, [(t, 0.0) for t in thetas], tol)
    values = np.array([resta_T(geometry, r.state, s) for r in results])
    diag = winding_number(values)
    min_gap = min(r.gap for r in results if r.gap is not None)
    return RestaChernResult(diag.winding, thetas, values, float(min_gap), diag)


@dataclass
class BerryChernResult:
    chern: int
    field: np.ndarray
    min_link_modulus: float
    min_gap: float


def berry_chern(geometry, basis, spec, s, n_x_steps=12, n_y_steps=12, tol=1e-9):
    """Discretized Berry-curvature Chern number over the twist torus.

    phi_x runs over [0, 2*pi*s) and phi_y over [0, 2*pi); link overlaps are
    normalized to unit modulus and plaquette field strengths are
    principal-branch logs, so the sum is an exact integer for a gapped
    family.
    """
    if geometry.boundary != "torus":
        raise GeometryMismatchError("Berry-curvature integration requires a torus")
    if n_x_steps < 3 or n_y_steps < 3:
        raise ValidationError("twist grid needs at least 3 steps per direction")
    phis_x = np.linspace(0.0, 2.0 * np.pi * s, n_x_steps, endpoint=False)
    phis_y = np.linspace(0.0, 2.0 * np.pi, n_y_steps, endpoint=False)

    states = {}
    min_gap = np.inf
    guess = None
    for i, px in enumerate(phis_x):
        column_guess = states[(i - 1, 0)].amplitudes if i > 0 else guess
        for j, py in enumerate(phis_y):
            op = build_hofstadter(geometry, basis, spec.with_twist(theta_x=px, theta_y=py))
            res = ground_state(op, tol=tol, guess=column_guess)
            gap_scale = max(abs(res.energy), 1.0)
            if res.gap is not None and res.gap < RELATIVE_GAP_FLOOR * gap_scale:
                raise DegeneracyError(
                    f"degenerate ground state at twist grid point ({i}, {j}): gap {res.gap:.3e}"
                )
            min_gap = min(min_gap, res.gap if res.gap is not None else np.inf)
            states[(i, j)] = res.state
            column_guess = res.state.amplitudes

    def link(a, b):
        ov = states[a].overlap(states[b])
        mod = abs(ov)
        if mod < MIN_LINK_MODULUS:
            raise GridTooCoarseError(
                f"link overlap {mod:.2e} between grid points {a} and {b}; refine the twist grid"
            )
        return ov / mod

    field = np.zeros((n_x_steps, n_y_steps))
    min_mod = np.inf
    for i in range(n_x_steps):
        for j in range(n_y_steps):
            ip, jp = (i + 1) % n_x_steps, (j + 1) % n_y_steps
            u1 = link((i, j), (ip, j))
            u2 = link((ip, j), (ip, jp))
            u3 = link((ip, jp), (i, jp))
            u4 = link((i, jp), (i, j))
            for a, b in (((i, j), (ip, j)), ((ip, j), (ip, jp))):
                min_mod = min(min_mod, abs(states[a].overlap(states[b])))
            field[i, j] = np.angle(u1 * u2 * u3 * u4)
    total = field.sum() / (2.0 * np.pi)
    chern = int(np.rint(total))
    if abs(total - chern) > 1e-6:
        raise ValidationError(f"plaquette field does not sum to an integer: {total:.6f}")
    return BerryChernResult(chern, field, float(min_mod), float(min_gap))
