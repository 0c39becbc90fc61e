"""Weight assignment, pure errors, Viterbi decoding, and decode pipelines.

Edge weights are negative log-likelihoods, so the minimum-weight path is
the most likely error consistent with the measured syndrome.  Weights are
nonnegative with ``+inf`` reserved for zero-probability labels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ffield
from .pauli import PauliString, from_symplectic, mul, sym_inner, syndrome
from .code import StabilizerCode, CssPart, css_split
from .trellis import Trellis, shift

SUCCESS = "success"
LOGICAL_FAILURE = "logical_failure"
INCONSISTENT = "internal_inconsistency"


class DecodeError(RuntimeError):
    """Raised when a decode query cannot be completed."""


@dataclass(frozen=True)
class WeightTable:
    """Per-position weights for every single-site label (a, b)."""

    p: int
    n: int
    table: np.ndarray  # shape (n, p, p), float64

    def __post_init__(self):
        if self.table.shape != (self.n, self.p, self.p):
            raise ValueError("weight table has the wrong shape")
        if not np.isfinite(self.table).any(axis=(1, 2)).all():
            raise ValueError("every position needs at least one finite weight")
        if (self.table < 0).any():
            raise ValueError("weights must be nonnegative")


@dataclass(frozen=True)
class DecodeOutcome:
    correction: PauliString
    path_weight: float
    classification: str
    logical_flags: tuple[int, ...]


def _site_probs(kind: str, rate: float, p: int) -> np.ndarray:
    """Single-site label probabilities of a named channel, shape (p, p)."""
    if not 0.0 <= rate <= 1.0:
        raise DecodeError(f"physical rate {rate} outside [0, 1]")
    probs = np.zeros((p, p))
    if kind == "depolarizing":
        probs[:] = rate / (p * p - 1)
        probs[0, 0] = 1.0 - rate
    elif kind == "dephasing_z":
        probs[0, 1:] = rate / (p - 1)
        probs[0, 0] = 1.0 - rate
    elif kind == "dephasing_x":
        probs[1:, 0] = rate / (p - 1)
        probs[0, 0] = 1.0 - rate
    else:
        raise DecodeError(f"unknown channel kind {kind!r}")
    return probs


_QUBIT_LABELS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def weights_from_channel(channel, n: int, *, p: int = 2, css_axis: str | None = None) -> WeightTable:
    """Turn a channel description into a weight table.

    ``channel`` is either an object with ``kind`` and ``p_phys`` fields, a
    ``(kind, rate)`` pair, or a direct mapping from qubit labels to weights
    (taken verbatim).  ``css_axis="X"`` produces the table for the
    X-stabilizer trellis whose labels are powers of Z, combining the
    probabilities of all labels with the same Z-part; symmetrically for
    ``"Z"``.
    """
    if isinstance(channel, dict):
        table = np.full((n, p, p), np.inf)
        for name, w in channel.items():
            a, b = _QUBIT_LABELS[name] if isinstance(name, str) else name
            table[:, a, b] = float(w)
        return WeightTable(p, n, table)
    if isinstance(channel, tuple):
        kind, rate = channel
    else:
        kind, rate = channel.kind, channel.p_phys
    probs = _site_probs(kind, rate, p)
    if (probs < 0).any() or probs.sum() > 1 + 1e-12:
        raise DecodeError("invalid channel probabilities")
    full = np.full((p, p), 0.0)
    if css_axis is None:
        full = probs
    elif css_axis == "X":
        # labels {I, Z, ...}: only zero X-exponent entries are reachable
        full[:] = 0.0
        full[0, :] = probs.sum(axis=0)
    elif css_axis == "Z":
        full[:] = 0.0
        full[:, 0] = probs.sum(axis=1)
    else:
        raise DecodeError(f"unknown css axis {css_axis!r}")
    with np.errstate(divide="ignore"):
        w = -np.log(full)
    return WeightTable(p, n, np.broadcast_to(w, (n, p, p)).copy())


def pure_error(code: StabilizerCode, s: np.ndarray) -> PauliString:
    """Any Pauli string whose syndrome equals ``s`` (a pseudoinverse)."""
    s = np.asarray(s, dtype=np.int64) % code.p
    if s.shape != (len(code.stabilizers),):
        raise DecodeError("syndrome length must match the stabilizer count")
    n, p = code.n, code.p
    C = np.zeros((len(code.stabilizers), 2 * n), dtype=np.int64)
    for j, g in enumerate(code.stabilizers):
        C[j, :n] = (-g.z) % p
        C[j, n:] = g.x
    v = ffield.solve(C, s, p)
    if v is None:
        raise DecodeError("syndrome is inconsistent with the stabilizers")
    return from_symplectic(v, p)


def _viterbi_arrays(
    t: Trellis,
    wtab: np.ndarray,
    shift_x: np.ndarray,
    shift_z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched Viterbi over one trellis.

    ``shift_x``/``shift_z`` hold per-sample pure-error exponents, shape
    (samples, n); the trellis itself stays at the zero syndrome and the
    shift is applied on the fly to each edge label.  Returns the x and z
    exponent arrays of the minimum-weight corrections and their weights.
    Ties resolve to the smallest (source, label) pair by construction of
    the edge ordering.
    """
    p, n = t.p, t.n
    count = shift_x.shape[0]
    dist = np.zeros((count, 1))
    back: list[np.ndarray] = []
    for i, sec in enumerate(t.sections):
        v_next = t.layers[i + 1].size
        deg = sec.size // v_next
        a = (sec.label[:, 0][None, :] + shift_x[:, i : i + 1]) % p
        b = (sec.label[:, 1][None, :] + shift_z[:, i : i + 1]) % p
        cost = dist[:, sec.source] + wtab[i, a, b]
        cost = cost.reshape(count, v_next, deg)
        arg = np.argmin(cost, axis=2)
        dist = np.take_along_axis(cost, arg[:, :, None], axis=2)[:, :, 0]
        back.append(arg.astype(np.int32))
    total = dist[:, 0].copy()
    xs = np.zeros((count, n), dtype=np.int64)
    zs = np.zeros((count, n), dtype=np.int64)
    cur = np.zeros(count, dtype=np.int64)
    rows = np.arange(count)
    for i in range(n - 1, -1, -1):
        sec = t.sections[i]
        deg = sec.size // t.layers[i + 1].size
        eidx = cur * deg + back[i][rows, cur]
        xs[:, i] = (sec.label[eidx, 0] + shift_x[:, i]) % p
        zs[:, i] = (sec.label[eidx, 1] + shift_z[:, i]) % p
        cur = sec.source[eidx]
    return xs, zs, total


def viterbi(t: Trellis, weights: WeightTable) -> tuple[PauliString, float]:
    """Minimum-weight path of an (already shifted) weighted trellis."""
    if weights.n != t.n or weights.p != t.p:
        raise DecodeError("weight table does not match the trellis")
    zero = np.zeros((1, t.n), dtype=np.int64)
    xs, zs, total = _viterbi_arrays(t, weights.table, zero, zero)
    if not np.isfinite(total[0]):
        raise DecodeError("no finite-weight path through the trellis")
    return PauliString(t.p, xs[0], zs[0]), float(total[0])


def classify_residual(
    code: StabilizerCode, true_error: PauliString, correction: PauliString
) -> tuple[str, tuple[int, ...]]:
    """Judge a correction against the actual error.

    The residual acts trivially exactly when it commutes with all 2k
    logical generators and has zero syndrome; the returned flags are the
    residual's commutation values against each logical generator.
    """
    residual = mul(true_error, correction)
    if np.any(syndrome(list(code.stabilizers), residual) % code.p):
        return INCONSISTENT, ()
    flags = tuple(sym_inner(residual, g) for g in code.logical_gens)
    return (SUCCESS if not any(flags) else LOGICAL_FAILURE), flags


def decode(
    code: StabilizerCode,
    base: Trellis,
    s: np.ndarray,
    weights: WeightTable,
    true_error: PauliString | None = None,
) -> DecodeOutcome:
    """Full pipeline: pure error, shift, Viterbi, verification."""
    T = pure_error(code, s)
    shifted = shift(base, T)
    correction, weight = viterbi(shifted, weights)
    check = syndrome(list(code.stabilizers), correction)
    if np.any((check - np.asarray(s)) % code.p):
        return DecodeOutcome(correction, weight, INCONSISTENT, ())
    if true_error is None:
        return DecodeOutcome(correction, weight, SUCCESS, ())
    cls, flags = classify_residual(code, true_error, correction)
    return DecodeOutcome(correction, weight, cls, flags)


def _part_pure_error(part: CssPart, s: np.ndarray) -> PauliString:
    """A dual-axis string reproducing the part's syndrome components."""
    p, n = part.p, part.n
    H = np.zeros((len(part.checks), n), dtype=np.int64)
    for j, chk in enumerate(part.checks):
        H[j] = chk.x if part.axis == "X" else chk.z
    v = ffield.solve(H, np.asarray(s, dtype=np.int64) % p, p)
    if v is None:
        raise DecodeError("part syndrome is inconsistent")
    zero = np.zeros(n, dtype=np.int64)
    return PauliString(p, zero, v) if part.axis == "X" else PauliString(p, v, zero)


def css_decode(
    code: StabilizerCode,
    x_trellis: Trellis,
    z_trellis: Trellis,
    s: np.ndarray,
    channel,
    true_error: PauliString | None = None,
) -> DecodeOutcome:
    """Independent X/Z decoding of a CSS code; corrections multiplied.

    ``channel`` is anything :func:`weights_from_channel` accepts, or a
    pair of ready WeightTables ``(x_part_weights, z_part_weights)``.
    """
    x_part, z_part = css_split(code)
    s = np.asarray(s, dtype=np.int64) % code.p
    if isinstance(channel, tuple) and all(isinstance(w, WeightTable) for w in channel):
        wx, wz = channel
    else:
        wx = weights_from_channel(channel, code.n, p=code.p, css_axis="X")
        wz = weights_from_channel(channel, code.n, p=code.p, css_axis="Z")
    correction = None
    weight_total = 0.0
    pos = {g: i for i, g in enumerate(code.stabilizers)}
    for part, trell, wt in ((x_part, x_trellis, wx), (z_part, z_trellis, wz)):
        # syndrome components of this part's checks, in check order
        s_part = np.array([s[pos[g]] for g in part.checks], dtype=np.int64)
        T = _part_pure_error(part, s_part)
        corr, w = viterbi(shift(trell, T), wt)
        weight_total += w
        correction = corr if correction is None else mul(correction, corr)
    check = syndrome(list(code.stabilizers), correction)
    if np.any((check - s) % code.p):
        return DecodeOutcome(correction, weight_total, INCONSISTENT, ())
    if true_error is None:
        return DecodeOutcome(correction, weight_total, SUCCESS, ())
    cls, flags = classify_residual(code, true_error, correction)
    return DecodeOutcome(correction, weight_total, cls, flags)


def block_decode(
    code: StabilizerCode,
    inner_trellis: Trellis,
    s: np.ndarray,
    weights: WeightTable,
    true_error: PauliString | None = None,
) -> DecodeOutcome:
    """Two-stage decoder for the level-2 concatenated Steane X-stabilizers.

    Stage 1 decodes the seven inner blocks independently on the 7-qubit
    X-part trellis; stage 2 decodes the induced block-level syndrome on
    the same trellis and lifts the result to full-block Z strings.  The
    sequential edge cost is twice one part trellis (36 + 36 = 72 edges)
    against 844 for the flat [[49,1,9]] X-part trellis.
    """
    n, p = code.n, code.p
    if n != 49 or p != 2:
        raise DecodeError("block decoding expects the level-2 Steane code")
    x_part, _ = css_split(code)
    pos = {g: i for i, g in enumerate(code.stabilizers)}
    s = np.asarray(s, dtype=np.int64) % p
    s_x = {g: s[pos[g]] for g in x_part.checks}
    # split X-checks into inner (single block) and outer (block-spanning)
    inner_checks: dict[int, list] = {b: [] for b in range(7)}
    outer_checks = []
    for g in x_part.checks:
        blocks = sorted(set((j // 7) for j in np.flatnonzero(g.x)))
        if len(blocks) == 1:
            inner_checks[blocks[0]].append(g)
        else:
            outer_checks.append(g)
    z_corr = np.zeros(n, dtype=np.int64)
    inner_weights = WeightTable(p, 7, weights.table[:7].copy())
    for b in range(7):
        checks = inner_checks[b]
        H = np.array([g.x[7 * b : 7 * b + 7] for g in checks], dtype=np.int64)
        sb = np.array([s_x[g] for g in checks], dtype=np.int64)
        v = ffield.solve(H, sb, p)
        if v is None:
            raise DecodeError("inconsistent inner syndrome")
        T = PauliString(p, np.zeros(7, dtype=np.int64), v)
        block_weights = WeightTable(p, 7, weights.table[7 * b : 7 * b + 7].copy())
        corr, _ = viterbi(shift(inner_trellis, T), block_weights)
        z_corr[7 * b : 7 * b + 7] = corr.z
    # stage 2: block-level parities against the outer checks
    residual_z = z_corr.copy()
    outer_s = []
    H_out = []
    for g in outer_checks:
        blocks = sorted(set((j // 7) for j in np.flatnonzero(g.x)))
        parity = sum(int(residual_z[7 * b : 7 * b + 7].sum()) for b in blocks) % p
        outer_s.append((s_x[g] - parity) % p)
        row = np.zeros(7, dtype=np.int64)
        row[blocks] = 1
        H_out.append(row)
    v = ffield.solve(np.array(H_out, dtype=np.int64), np.array(outer_s, dtype=np.int64), p)
    if v is None:
        raise DecodeError("inconsistent outer syndrome")
    T_out = PauliString(p, np.zeros(7, dtype=np.int64), v)
    uniform = WeightTable(p, 7, np.broadcast_to(np.array([[0.0, 1.0], [np.inf, np.inf]]), (7, 2, 2)).copy())
    outer_corr, _ = viterbi(shift(inner_trellis, T_out), uniform)
    for b in np.flatnonzero(outer_corr.z):
        z_corr[7 * b : 7 * b + 7] = (z_corr[7 * b : 7 * b + 7] + 1) % p
    correction = PauliString(p, np.zeros(n, dtype=np.int64), z_corr)
    # verify against the X-type components only (Z noise assumed)
    weight = float(np.sum(weights.table[np.arange(n), 0, z_corr % p]))
    for g in x_part.checks:
        if sym_inner(g, correction) != int(s_x[g]):
            return DecodeOutcome(correction, weight, INCONSISTENT, ())
    if true_error is None:
        return DecodeOutcome(correction, weight, SUCCESS, ())
    cls, flags = classify_residual(code, true_error, correction)
    return DecodeOutcome(correction, weight, cls, flags)
