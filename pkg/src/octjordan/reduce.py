"""Constructive prehomogeneity: carry a generic point of J3(O) to the identity.

The reduction follows the orbit argument step by step: alternate Spin7
moves and 3x3 congruences until the triple is complex symmetric, then
finish with one congruence onto the identity matrix.  Spin7 moves come in
two flavours, mirroring how the transitivity of the group on sphere/pair
strata is invoked:

  * when only the c slot is steered, the move is an explicit
    reflection-pair rotation in the imaginary 7-space followed by the
    triality lift (move_c_to_plane);
  * when a pair condition must hold simultaneously (steer c while placing
    or fixing the image of a under the spinor-slot T1), the move is found
    by Gauss-Newton over a Cayley chart of the skew matrices commuting
    with the T2 constraint (stabilizer_solve); the triality lift runs
    inside the residual, so converged solutions are genuine group
    elements.

Every denominator of the pipeline (r2, r3, lambda2, r7, the half-space
pairings) is guarded by a relative threshold; a generic input never
trips them, and a degenerate one aborts with the violated quantity named
rather than limping on.  The emitted word is self-certifying: replaying
it on the input must reproduce the identity up to the requested
tolerance.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import cayley, linalg, symmetry
from .cayley import AlgebraElement
from .coeffs import ComplexField
from .jordan import HermitianTriple, identity_triple
from .symmetry import TrialityTriple, lift_right_companion, sl3_act, spin7_act

GENERIC_TOL = 1e-8      # relative threshold on every proof denominator
GN_TOL = 1e-10
GN_MAX_ITERS = 50
GN_RESTARTS = 20
TRIALITY_TOL = 1e-10

_RING = ComplexField()


class NonGenericInput(RuntimeError):
    """A genericity condition of the reduction failed; names the step."""

    def __init__(self, step: str, detail: str):
        super().__init__(f"step '{step}': {detail}")
        self.step = step
        self.detail = detail


@dataclass
class TransformWord:
    """Moves plus a trailing scalar; replaying them reproduces the record."""

    moves: list = field(default_factory=list)       # ("spin7", TrialityTriple) | ("congruence", H)
    steps: list = field(default_factory=list)       # parallel step labels
    scale: complex = 1 + 0j
    intermediates: list = field(default_factory=list)  # flattened states after each move
    residual: float = 0.0

    def record(self, label: str, move, state: HermitianTriple):
        self.moves.append(move)
        self.steps.append(label)
        self.intermediates.append(list(state.flatten()))

    def to_json_dict(self) -> dict:
        def c2(z):
            return [z.real, z.imag]

        def mat(m):
            return [[c2(complex(v)) for v in row] for row in np.asarray(m)]

        moves = []
        for (kind, payload), label in zip(self.moves, self.steps):
            if kind == "spin7":
                moves.append({"kind": "spin7", "step": label,
                              "t1": mat(payload.t1), "t2": mat(payload.t2)})
            else:
                moves.append({"kind": "congruence", "step": label,
                              "h": mat(payload),
                              "det": c2(complex(np.linalg.det(payload)))})
        return {
            "moves": moves,
            "scale": c2(self.scale),
            "intermediates": [[c2(z) for z in s] for s in self.intermediates],
            "residual": self.residual,
        }


def apply_move(move, t: HermitianTriple) -> HermitianTriple:
    kind, payload = move
    if kind == "spin7":
        return spin7_act(payload, t)
    return sl3_act(t.ring, payload, t)


def replay(word: TransformWord, t: HermitianTriple) -> HermitianTriple:
    for move in word.moves:
        t = apply_move(move, t)
    return t.scale(word.scale)


def _norm(t: HermitianTriple) -> float:
    return math.sqrt(sum(abs(z) ** 2 for z in t.flatten()))


def distance_to_identity(t: HermitianTriple) -> float:
    ident = identity_triple(t.ring, t.level)
    return math.sqrt(sum(abs(p - q) ** 2 for p, q in zip(t.flatten(), ident.flatten())))


def random_generic_triple(rng: random.Random) -> HermitianTriple:
    """Unit-normal coordinates; generic with probability one."""
    coords = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(27)]
    from .jordan import unflatten
    return unflatten(_RING, 3, coords)


# Spin7 move with an explicit rotation: steer c into a coordinate 2-plane.

def move_c_to_plane(t: HermitianTriple, target: int = 1):
    """Spin7 move whose T2 maps c into span(e1, e_{target+1}).

    Built from a reflection pair in the 7-dimensional imaginary space
    (fixing e1) followed by the triality lift; c real is the degenerate
    branch where the identity move suffices.
    """
    scale = max(_norm(t), 1e-300)
    imvec = np.array((0,) + t.c.coords[1:], dtype=complex)
    if np.max(np.abs(imvec)) <= GENERIC_TOL * scale:
        trip = TrialityTriple.identity(t.ring)
        return trip, t
    targetvec = np.zeros(8, dtype=complex)
    targetvec[target] = 1
    try:
        t2 = linalg.reflection_pair(t.ring, imvec, targetvec)
    except linalg.IsotropicVectorError as exc:
        raise NonGenericInput("move_c_to_plane", f"imaginary part of c is unusable: {exc}")
    trip = lift_right_companion(t.ring, t2, tol=TRIALITY_TOL)
    return trip, spin7_act(trip, t)


# Gauss-Newton over a stabilizer chart, with the lift inside the residual.

def _skew_chart(fixed: int | None) -> list:
    """Basis of skew 8x8 matrices vanishing on e1 (and on e_{fixed+1})."""
    chart = []
    for i in range(1, 8):
        if i == fixed:
            continue
        for j in range(i + 1, 8):
            if j == fixed:
                continue
            m = np.zeros((8, 8), dtype=complex)
            m[i, j] = 1
            m[j, i] = -1
            chart.append(m)
    return chart


class _Residual:
    """Residual of the placement conditions as a function of the chart
    parameters.  The lift is defined up to sign; aligning to the previous
    accepted T1 keeps the residual continuous across nearby evaluations."""

    def __init__(self, base: np.ndarray, chart: list, span_w, span_allowed):
        self.base = base
        self.chart = chart
        self.span_w = np.array(span_w.coords, dtype=complex)
        self.span_banned = [k for k in range(8) if k not in span_allowed]
        self.t1_ref = None

    def __call__(self, theta: np.ndarray):
        skew = np.zeros((8, 8), dtype=complex)
        for v, m in zip(theta, self.chart):
            skew += v * m
        t2 = linalg.cayley_orthogonal(_RING, skew) @ self.base
        t1 = symmetry.fast_right_companion(_RING, t2)
        if self.t1_ref is not None and \
                np.linalg.norm(-t1 - self.t1_ref) < np.linalg.norm(t1 - self.t1_ref):
            t1 = -t1
        img = t1 @ self.span_w
        return img[self.span_banned], TrialityTriple(_RING, t1, t2)


def _random_stabilizer_move(rng: random.Random, fixed: int) -> TrialityTriple:
    """Random Spin7 element whose T2 fixes e1 and the given basis direction."""
    chart = _skew_chart(fixed)
    for _ in range(16):
        skew = np.zeros((8, 8), dtype=complex)
        for m in chart:
            skew += complex(rng.gauss(0, 0.5), rng.gauss(0, 0.5)) * m
        try:
            t2 = linalg.cayley_orthogonal(_RING, skew)
            return lift_right_companion(_RING, t2, tol=TRIALITY_TOL)
        except (linalg.SingularMatrixError, symmetry.LiftError):
            continue
    raise NonGenericInput("stabilizer rerandomization", "no usable stabilizer element")


def stabilizer_solve(t: HermitianTriple, rng: random.Random, step: str,
                     span_w: AlgebraElement, span_allowed,
                     steer: tuple | None = None):
    """Find a Spin7 element whose T1 slot sends the designated octonion
    into the designated coordinate plane, optionally while the T2 slot
    maps one basis direction to another.

    steer = (i, j) maps basis direction e_{i+1} to e_{j+1} under T2, held
    exactly by restricting the chart to the 15-dimensional stabilizer of
    the target (21 chart dimensions when unconstrained); the T1 placement
    is solved by damped Gauss-Newton with random restarts and the
    triality lift inside the residual.  Returns (move, moved triple).
    """
    if steer is not None:
        src = np.zeros(8, dtype=complex)
        src[steer[0]] = 1
        dst = np.zeros(8, dtype=complex)
        dst[steer[1]] = 1
        base = linalg.reflection_pair(_RING, src, dst)
        chart = _skew_chart(steer[1])
    else:
        base = np.eye(8, dtype=complex)
        chart = _skew_chart(None)
    res = _Residual(base, chart, span_w, span_allowed)
    npar = len(chart)
    tol = GN_TOL * max(float(np.linalg.norm(res.span_w)), 1.0)
    for restart in range(GN_RESTARTS):
        res.t1_ref = None
        if restart == 0:
            theta = np.zeros(npar, dtype=complex)
        else:
            spread = 0.4 + 0.2 * (restart % 3)
            theta = np.array([complex(rng.gauss(0, spread), rng.gauss(0, spread))
                              for _ in range(npar)])
        try:
            r, trip = res(theta)
        except (symmetry.LiftError, linalg.SingularMatrixError):
            continue
        res.t1_ref = trip.t1
        for _ in range(GN_MAX_ITERS):
            rn = np.linalg.norm(r)
            if rn <= tol:
                final = lift_right_companion(_RING, trip.t2, tol=TRIALITY_TOL)
                if np.linalg.norm(final.t1 - trip.t1) > np.linalg.norm(final.t1 + trip.t1):
                    final = TrialityTriple(_RING, -final.t1, final.t2)
                return ("spin7", final), spin7_act(final, t)
            h = 1e-7
            jac = np.empty((len(r), npar), dtype=complex)
            try:
                for k in range(npar):
                    bump = theta.copy()
                    bump[k] += h
                    rk, _ = res(bump)
                    jac[:, k] = (rk - r) / h
            except (symmetry.LiftError, linalg.SingularMatrixError):
                break
            step_vec = np.linalg.lstsq(jac, -r, rcond=None)[0]
            improved = False
            damp = 1.0
            for _ in range(10):
                try:
                    r2, trip2 = res(theta + damp * step_vec)
                except (symmetry.LiftError, linalg.SingularMatrixError):
                    damp /= 2
                    continue
                if np.linalg.norm(r2) < rn:
                    theta = theta + damp * step_vec
                    r, trip = r2, trip2
                    res.t1_ref = trip.t1
                    improved = True
                    break
                damp /= 2
            if not improved:
                break
    raise NonGenericInput(step, "Gauss-Newton stagnated on the pair condition")


def symmetric_congruence_to_identity(s: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """H with H^T S H = I for nondegenerate complex symmetric 3x3 S.

    Successive completion of squares with pivot permutation; square roots
    on the principal branch.
    """
    s = np.array(s, dtype=complex)
    if s.shape != (3, 3) or np.max(np.abs(s - s.T)) > tol * max(1.0, np.max(np.abs(s))):
        raise ValueError("expected a symmetric 3x3 matrix")
    scale = max(float(np.max(np.abs(s))), 1e-300)
    if abs(np.linalg.det(s)) <= 1e-10 * scale ** 3:
        raise linalg.SingularMatrixError("congruence target is numerically singular")
    h = np.eye(3, dtype=complex)
    work = s.copy()
    for k in range(3):
        piv = k + int(np.argmax(np.abs(np.diag(work)[k:])))
        if abs(work[piv, piv]) <= 1e-12 * scale:
            # all remaining diagonal entries vanish; bring in an off-diagonal
            found = False
            for i in range(k, 3):
                for j in range(i + 1, 3):
                    if abs(work[i, j]) > 1e-12 * scale:
                        e = np.eye(3, dtype=complex)
                        e[j, i] = 1  # col_i += col_j turns 2 S_ij into a diagonal pivot
                        work = e.T @ work @ e
                        h = h @ e
                        found = True
                        break
                if found:
                    break
            piv = k + int(np.argmax(np.abs(np.diag(work)[k:])))
        if piv != k:
            perm = np.eye(3, dtype=complex)
            perm[[k, piv]] = perm[[piv, k]]
            work = perm.T @ work @ perm
            h = h @ perm
        d = work[k, k]
        e = np.eye(3, dtype=complex)
        for i in range(k + 1, 3):
            e[k, i] = -work[k, i] / d
        work = e.T @ work @ e
        h = h @ e
    root = np.diag([1 / cmath.sqrt(work[i, i]) for i in range(3)])
    h = h @ root
    if np.max(np.abs(h.T @ s @ h - np.eye(3))) > tol * max(1.0, scale):
        raise linalg.SingularMatrixError("congruence residual too large")
    return h


# the reduction pipeline

def _coord(t: HermitianTriple, slot: str, k: int) -> complex:
    return getattr(t, slot).coords[k]


def _guard(step: str, name: str, value: complex, scale: float):
    if abs(value) <= GENERIC_TOL * max(scale, 1e-300):
        raise NonGenericInput(step, f"{name} below the genericity threshold")
    return value


def _halves(x: AlgebraElement):
    s = cayley.split(x)
    return (np.array(s.x0.coords[:4], dtype=complex),
            np.array(s.x1.coords[:4], dtype=complex))


def _elementary(i: int, j: int, v: complex) -> np.ndarray:
    h = np.eye(3, dtype=complex)
    h[i, j] = v
    return h


def _is_offdiag_zero(t: HermitianTriple, tol: float) -> bool:
    return all(max(abs(z) for z in x.coords) <= tol
               for x in (t.a, t.b, t.c))


def reduce_to_identity(t: HermitianTriple, tol: float = 1e-6,
                       seed: int = 0) -> TransformWord:
    """Word in Spin7 moves and congruences carrying a generic triple to the
    identity; the trailing scalar carries the C* factor of the action."""
    if not isinstance(t.ring, ComplexField):
        raise ValueError("the reduction runs in complex arithmetic")
    rng = random.Random(seed)
    word = TransformWord()
    state = t
    scale0 = _norm(t)

    if distance_to_identity(t) <= tol:
        word.residual = distance_to_identity(t)
        return word

    if not _is_offdiag_zero(state, GENERIC_TOL * max(scale0, 1e-300)):
        state = _offdiagonal_pipeline(state, word, rng)

    # final congruence: the state is complex symmetric now
    sc = _norm(state)
    for slot in ("a", "b", "c"):
        imax = max(abs(z) for z in getattr(state, slot).coords[1:])
        if imax > 1e-6 * max(sc, 1.0):
            raise NonGenericInput("final congruence", f"imaginary residue in {slot}")
    smat = np.array([[state.lambdas[0], _coord(state, "c", 0), _coord(state, "b", 0)],
                     [_coord(state, "c", 0), state.lambdas[1], _coord(state, "a", 0)],
                     [_coord(state, "b", 0), _coord(state, "a", 0), state.lambdas[2]]],
                    dtype=complex)
    dets = np.linalg.det(smat)
    _guard("final congruence", "det of the symmetric state", dets, max(sc, 1.0) ** 3)
    mu = (1 / dets) ** (1 / 3)
    word.scale = mu
    state = state.scale(mu)
    smat = smat * mu
    h = symmetric_congruence_to_identity(smat)
    if abs(np.linalg.det(h) + 1) < 0.5:  # det -1: flip a column to land in SL3
        h = h @ np.diag([-1, 1, 1]).astype(complex)
    state = sl3_act(_RING, h, state)
    word.record("final congruence", ("congruence", h), state)
    word.residual = distance_to_identity(state)
    if word.residual > tol:
        raise NonGenericInput("final state",
                              f"replay residual {word.residual:.3e} exceeds {tol:.1e}")
    return word


def _apply_and_record(word: TransformWord, label: str, move, state) -> HermitianTriple:
    word.record(label, move, state)
    return state


def _offdiagonal_pipeline(state: HermitianTriple, word: TransformWord,
                          rng: random.Random) -> HermitianTriple:
    # step 1: rotate c into span(e1, i)
    trip, state = move_c_to_plane(state, target=1)
    state = _apply_and_record(word, "c to (1,i) plane", ("spin7", trip), state)
    sc = _norm(state)
    r1 = _guard("c to (1,i) plane", "r1 = Re(c)", _coord(state, "c", 0), sc)
    r2 = _guard("c to (1,i) plane", "r2 = i-part of c", _coord(state, "c", 1), sc)

    # arrange the half-space pairing <conj(c) half, l-half of a> to be nonzero;
    # the stabilizer of c still acts freely on a if a rerandomization is needed
    for attempt in range(8):
        a0, a1 = _halves(state.a)
        cbar_half = np.array([r1, -r2, 0, 0], dtype=complex)
        pairing = complex(cbar_half @ a1)
        if abs(pairing) > GENERIC_TOL * sc and np.max(np.abs(a0)) > GENERIC_TOL * sc \
                and np.max(np.abs(a1)) > GENERIC_TOL * sc:
            break
        trip = _random_stabilizer_move(rng, fixed=1)  # keeps c = r1 + r2 i in place
        state = spin7_act(trip, state)
        state = _apply_and_record(word, "rearrange a in the c stabilizer",
                                  ("spin7", trip), state)
        sc = _norm(state)
        r1, r2 = _coord(state, "c", 0), _coord(state, "c", 1)
    else:
        raise NonGenericInput("pairing arrangement",
                              "<conj(c), a_1> pairing stayed below the genericity threshold")

    # step 2: congruence making the two quaternion halves of a orthogonal
    q = complex(a0 @ a1) / pairing
    h = _elementary(0, 2, -q)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "orthogonalize a halves", ("congruence", h), state)
    sc = _norm(state)

    # step 3: steer c to span(1, n) while T1 puts a into span(i, n)
    move, state = stabilizer_solve(state, rng, "pair-steer c to n, a to (i,n)",
                                   steer=(1, 6), span_w=state.a, span_allowed=(1, 6))
    state = _apply_and_record(word, "pair-steer c to n, a to (i,n)", move, state)
    sc = _norm(state)
    r2 = _guard("pair-steer", "r2 = n-part of c", _coord(state, "c", 6), sc)
    r3 = _coord(state, "a", 1)
    r4 = _coord(state, "a", 6)

    # step 4: congruence killing the n-component of a
    h = _elementary(0, 2, r4 / r2)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "kill n-part of a", ("congruence", h), state)
    sc = _norm(state)
    r3 = _guard("kill n-part of a", "r3 = i-part of a", _coord(state, "a", 1), sc)

    # step 5: steer c back to span(1, i) keeping a in span(1, i)
    move, state = stabilizer_solve(state, rng, "steer c back keeping a in (1,i)",
                                   span_w=state.a, span_allowed=(0, 1), steer=(6, 1))
    state = _apply_and_record(word, "steer c back keeping a in (1,i)", move, state)
    sc = _norm(state)
    r2 = _coord(state, "c", 1)
    r3 = _guard("steer c back", "r3 = i-part of a", _coord(state, "a", 1), sc)

    # step 6: congruence making c real
    h = _elementary(2, 0, r2 / r3)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "make c real", ("congruence", h), state)
    sc = _norm(state)
    if max(abs(z) for z in state.c.coords[1:]) > 1e-6 * sc:
        raise NonGenericInput("make c real", "imaginary residue of c")

    # step 7: T1 sends a to a complex scalar (c real is T2-invariant)
    move, state = stabilizer_solve(state, rng, "scalarize a",
                                   span_w=state.a, span_allowed=(0,))
    state = _apply_and_record(word, "scalarize a", move, state)
    sc = _norm(state)
    r6 = _coord(state, "c", 0)
    r7 = _guard("scalarize a", "r7 = Re(a)", _coord(state, "a", 0), sc)
    _guard("scalarize a", "lambda2", state.lambdas[1], sc)

    # step 8: kill c, then a, then push the octonion in b to the c slot
    h = _elementary(2, 0, -r6 / r7)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "kill c", ("congruence", h), state)
    h = _elementary(1, 2, -_coord(state, "a", 0) / state.lambdas[1])
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "kill a", ("congruence", h), state)
    h = np.array([[-1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "swap b into the c slot", ("congruence", h), state)

    # step 9: rotate the remaining octonion into span(1, i)
    trip, state = move_c_to_plane(state, target=1)
    state = _apply_and_record(word, "b-octonion to (1,i) plane", ("spin7", trip), state)

    # step 10: permute it into the a slot
    h = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=complex)
    state = sl3_act(_RING, h, state)
    state = _apply_and_record(word, "swap into the a slot", ("congruence", h), state)

    # step 11: T1 scalarizes the last octonion
    sc = _norm(state)
    if max(abs(z) for z in state.a.coords[1:]) > GENERIC_TOL * sc:
        move, state = stabilizer_solve(state, rng, "scalarize the last octonion",
                                       span_w=state.a, span_allowed=(0,))
        state = _apply_and_record(word, "scalarize the last octonion", move, state)
    return state
