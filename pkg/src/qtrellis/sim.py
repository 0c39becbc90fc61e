"""Noise channels, exact enumeration, Monte Carlo harness, threshold fits.

Sampling is vectorized and fully deterministic: every grid point derives
its generator from (seed, point index), so results do not depend on how
the work is distributed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString
from .code import StabilizerCode, css_split
from .trellis import Trellis, CapacityError, build
from .decode import (
    WeightTable,
    weights_from_channel,
    _site_probs,
    _viterbi_arrays,
)

_WILSON_Z = 1.959963984540054  # 95%


class SimError(RuntimeError):
    """Invalid simulation request."""


@dataclass(frozen=True)
class ChannelSpec:
    """A single-site i.i.d. noise model."""

    kind: str
    p_phys: float

    def __post_init__(self):
        if self.kind not in ("depolarizing", "dephasing_z", "dephasing_x"):
            raise SimError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.p_phys <= 1.0:
            raise SimError(f"physical rate {self.p_phys} outside [0, 1]")

    def site_probs(self, p: int = 2) -> np.ndarray:
        return _site_probs(self.kind, self.p_phys, p)

    @property
    def single_axis(self) -> bool:
        return self.kind in ("dephasing_z", "dephasing_x")


@dataclass(frozen=True)
class DataPoint:
    """One Monte Carlo grid point; rates reported both ways.

    ``rate_cond`` is the failure fraction among non-identity errors and
    ``rate_uncond`` scales it by the probability that any error occurred.
    The Wilson interval covers the conditional rate.
    """

    p_phys: float
    samples: int
    failures: int
    rate_cond: float
    rate_uncond: float
    ci_lo: float
    ci_hi: float
    conditioning: str = "nontrivial"
    ci_method: str = "wilson95"


@dataclass(frozen=True)
class ThresholdFit:
    p_th: float
    nu: float
    A: float
    B: float
    C: float
    residual: float
    distances: tuple[int, ...]
    small_distance_caveat: bool = False


def _wilson(failures: int, samples: int) -> tuple[float, float]:
    z = _WILSON_Z
    if samples == 0:
        return 0.0, 1.0
    phat = failures / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = z * np.sqrt(phat * (1 - phat) / samples + z * z / (4 * samples**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _sample_batch(
    channel: ChannelSpec, n: int, rng: np.random.Generator, count: int, p: int = 2
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` i.i.d. errors; returns (x, z) exponent arrays."""
    probs = channel.site_probs(p).ravel()
    flat = rng.choice(p * p, size=(count, n), p=probs)
    return flat // p, flat % p


def sample_error(
    channel: ChannelSpec,
    n: int,
    rng: np.random.Generator,
    condition_nontrivial: bool = False,
    p: int = 2,
) -> PauliString:
    """One draw from the channel, optionally rejected until non-identity."""
    if condition_nontrivial and channel.p_phys == 0.0:
        raise SimError("cannot condition on errors from a noiseless channel")
    while True:
        xs, zs = _sample_batch(channel, n, rng, 1, p)
        err = PauliString(p, xs[0], zs[0])
        if not condition_nontrivial or not err.is_identity():
            return err


def _logical_matrix(code: StabilizerCode) -> np.ndarray:
    """Rows compute commutation of a symplectic vector with each logical."""
    n, p = code.n, code.p
    L = np.zeros((len(code.logical_gens), 2 * n), dtype=np.int64)
    for j, g in enumerate(code.logical_gens):
        L[j, :n] = (-g.z) % p
        L[j, n:] = g.x
    return L


def _decode_batch(
    code: StabilizerCode,
    trellises: dict[str, Trellis],
    decoder: str,
    channel: ChannelSpec,
    err_x: np.ndarray,
    err_z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Corrections for a batch of errors, shifting by the errors themselves."""
    n, p = code.n, code.p
    if decoder == "full":
        wt = weights_from_channel(channel, n, p=p)
        return _viterbi_arrays(trellises["full"], wt.table, err_x, err_z)[:2]
    if decoder == "css":
        zero = np.zeros_like(err_x)
        # the X-stabilizer trellis corrects the Z-part of the error
        if err_z.any():
            wx = weights_from_channel(channel, n, p=p, css_axis="X")
            _, corr_z, _ = _viterbi_arrays(trellises["x"], wx.table, zero, err_z)
        else:
            corr_z = zero
        if err_x.any():
            wz = weights_from_channel(channel, n, p=p, css_axis="Z")
            corr_x, _, _ = _viterbi_arrays(trellises["z"], wz.table, err_x, zero)
        else:
            corr_x = zero
        return corr_x, corr_z
    if decoder == "block":
        return _block_decode_batch(trellises["inner"], channel, err_x, err_z)
    raise SimError(f"unknown decoder mode {decoder!r}")


def _block_decode_batch(
    inner: Trellis, channel: ChannelSpec, err_x: np.ndarray, err_z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized two-stage decoder for level-2 Steane under Z noise."""
    count = err_z.shape[0]
    if err_x.any():
        raise SimError("block decoding handles single-axis Z noise only")
    wt = weights_from_channel(channel, 7, css_axis="X")
    zero = np.zeros((7 * count, 7), dtype=np.int64)
    inner_z = err_z.reshape(count * 7, 7)
    _, corr_z, _ = _viterbi_arrays(inner, wt.table, zero, inner_z)
    corr_z = corr_z.reshape(count, 7, 7)
    # the residual per block has zero inner syndrome, so its logical class
    # is its parity; the class vector feeds the outer stage as a Z shift
    parity = (err_z.reshape(count, 7, 7) + corr_z).sum(axis=2) % 2
    uniform = np.broadcast_to(np.array([[0.0, 1.0], [np.inf, np.inf]]), (7, 2, 2))
    zero1 = np.zeros((count, 7), dtype=np.int64)
    _, outer_z, _ = _viterbi_arrays(inner, uniform, zero1, parity)
    corr_z = (corr_z + outer_z[:, :, None]) % 2
    return np.zeros_like(err_z), corr_z.reshape(count, 49)


def _failures(
    code: StabilizerCode,
    err_x: np.ndarray,
    err_z: np.ndarray,
    corr_x: np.ndarray,
    corr_z: np.ndarray,
) -> np.ndarray:
    """Boolean failure flags for decoded samples (residual acts logically)."""
    p = code.p
    res = np.hstack([(err_x + corr_x) % p, (err_z + corr_z) % p])
    L = _logical_matrix(code)
    return (res @ L.T % p).any(axis=1)


def exact_rate(
    code: StabilizerCode,
    channel: ChannelSpec,
    decoder: str = "full",
    *,
    trellises: dict[str, Trellis] | None = None,
    max_edges: int = 10**8,
) -> float:
    """Exact logical failure probability by error-pattern enumeration.

    Single-axis channels enumerate p^n patterns (cap n such that
    p^n <= 2^26); general channels enumerate p^(2n) (cap 2^20 patterns).
    Every distinct syndrome is decoded once; the channel probabilities of
    the failing patterns are summed exactly.
    """
    n, p = code.n, code.p
    if channel.single_axis:
        if p**n > 2**26:
            raise CapacityError(f"single-axis enumeration cap exceeded at n={n}")
        bits = n
    else:
        if p ** (2 * n) > 2**20:
            raise CapacityError(f"full-channel enumeration cap exceeded at n={n}")
        bits = 2 * n
    if trellises is None:
        trellises = build_trellises(code, decoder, max_edges=max_edges)
    r = channel.p_phys
    total = p**bits
    chunk = 1 << 18
    powers = p ** np.arange(bits, dtype=np.int64)
    m = len(code.stabilizers)
    C = np.zeros((m, 2 * n), dtype=np.int64)
    for j, g in enumerate(code.stabilizers):
        C[j, :n] = (-g.z) % p
        C[j, n:] = g.x
    L = _logical_matrix(code)
    radix = p ** np.arange(m - 1, -1, -1, dtype=np.int64)

    def split(pat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if channel.kind == "dephasing_z":
            return np.zeros_like(pat), pat
        if channel.kind == "dephasing_x":
            return pat, np.zeros_like(pat)
        return pat[:, :n], pat[:, n:]

    # pass 1: the set of syndromes the channel can actually produce
    seen: set[int] = set()
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        err_x, err_z = split((idx[:, None] // powers) % p)
        s = (err_x @ C[:, :n].T + err_z @ C[:, n:].T) % p
        seen.update(np.unique(s @ radix).tolist())
    unique = np.array(sorted(seen), dtype=np.int64)
    s_digits = (unique[:, None] // radix) % p
    # decode every distinct syndrome once, shifting by a linear pure error
    from .decode import pure_error

    Tmat = np.array(
        [pure_error(code, row).symplectic() for row in np.eye(m, dtype=np.int64)]
    )
    T = s_digits @ Tmat % p
    if decoder == "block" and channel.kind == "dephasing_z":
        # the inner-block stage expects a pure-Z shift; valid because every
        # occurring syndrome has zero Z-check components
        T[:, :n] = 0
    corr_flags = np.zeros((unique.size, L.shape[0]), dtype=np.int64)
    for lo in range(0, unique.size, 4096):
        hi = min(lo + 4096, unique.size)
        corr_x, corr_z = _decode_batch(
            code, trellises, decoder, channel, T[lo:hi, :n], T[lo:hi, n:]
        )
        corr_flags[lo:hi] = (corr_x @ L[:, :n].T + corr_z @ L[:, n:].T) % p
    # pass 2: accumulate exact probabilities of the failing patterns
    rate = 0.0
    site = r / (p - 1) if channel.single_axis else r / (p * p - 1)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        err_x, err_z = split((idx[:, None] // powers) % p)
        s = (err_x @ C[:, :n].T + err_z @ C[:, n:].T) % p
        rows = np.searchsorted(unique, s @ radix)
        err_flags = (err_x @ L[:, :n].T + err_z @ L[:, n:].T) % p
        fail = ((err_flags + corr_flags[rows]) % p).any(axis=1)
        weight = ((err_x != 0) | (err_z != 0)).sum(axis=1)
        probs = (1.0 - r) ** (n - weight) * site**weight
        rate += float(probs[fail].sum())
    return rate


def build_trellises(
    code: StabilizerCode, decoder: str, *, max_edges: int = 10**8
) -> dict[str, Trellis]:
    """The trellis set a decoder mode needs for a given code."""
    if decoder == "full":
        return {"full": build(code, max_edges=max_edges)}
    if decoder == "css":
        x_part, z_part = css_split(code)
        return {
            "x": build(x_part, max_edges=max_edges),
            "z": build(z_part, max_edges=max_edges),
        }
    if decoder == "block":
        from .code import builtin

        x_part, _ = css_split(builtin("steane"))
        return {"inner": build(x_part, max_edges=max_edges)}
    raise SimError(f"unknown decoder mode {decoder!r}")


def run_montecarlo(
    code: StabilizerCode,
    trellises: dict[str, Trellis],
    channel_kind: str,
    grid,
    samples: int,
    seed: int,
    workers: int = 1,
    decoder: str = "full",
    batch: int = 4096,
) -> list[DataPoint]:
    """Estimate conditional and unconditional logical failure rates.

    For each grid point, ``samples`` errors are drawn conditioned on being
    non-identity; failures are counted after decoding and classification.
    The generator stream depends only on (seed, point index), making the
    output invariant to ``workers`` and batch size.
    """
    if samples <= 0:
        raise SimError("sample count must be positive")
    if workers < 1:
        raise SimError("worker count must be positive")
    n, p = code.n, code.p
    points = []
    for pt_index, p_phys in enumerate(grid):
        channel = ChannelSpec(channel_kind, float(p_phys))
        if channel.p_phys == 0.0:
            raise SimError("cannot condition on errors at zero noise")
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(pt_index,)))
        # draw all conditioned samples first, in fixed-size chunks, so the
        # random stream never depends on batching or worker layout
        err_x = np.empty((samples, n), dtype=np.int64)
        err_z = np.empty((samples, n), dtype=np.int64)
        collected = 0
        while collected < samples:
            cx, cz = _sample_batch(channel, n, rng, 8192, p)
            keep = ((cx != 0) | (cz != 0)).any(axis=1)
            cx, cz = cx[keep], cz[keep]
            take = min(cx.shape[0], samples - collected)
            err_x[collected : collected + take] = cx[:take]
            err_z[collected : collected + take] = cz[:take]
            collected += take
        failures = 0
        for lo in range(0, samples, batch):
            hi = min(lo + batch, samples)
            corr_x, corr_z = _decode_batch(
                code, trellises, decoder, channel, err_x[lo:hi], err_z[lo:hi]
            )
            failures += int(
                _failures(code, err_x[lo:hi], err_z[lo:hi], corr_x, corr_z).sum()
            )
        rate_cond = failures / samples
        p_nt = 1.0 - (1.0 - channel.p_phys) ** n
        lo, hi = _wilson(failures, samples)
        points.append(
            DataPoint(
                float(p_phys), samples, failures, rate_cond, rate_cond * p_nt, lo, hi
            )
        )
    return points


def fit_threshold(datasets: dict[int, list[DataPoint]], dmin: int = 9) -> ThresholdFit:
    """Finite-size scaling fit of the quadratic ansatz.

    Least squares over (A, B, C) with a grid search over the threshold
    and the scaling exponent; ``datasets`` maps distance to data points.
    Distances below ``dmin`` are only used when nothing else is available.
    """
    usable = {d: pts for d, pts in datasets.items() if d >= dmin}
    caveat = False
    if len(usable) < 3:
        usable = dict(datasets)
        caveat = True
    if len(usable) < 3:
        raise SimError("threshold fit needs at least three distances")
    ds, ps, ys = [], [], []
    for d, pts in usable.items():
        for pt in pts:
            ds.append(d)
            ps.append(pt.p_phys)
            ys.append(pt.rate_cond)
    ds = np.array(ds, dtype=float)
    ps = np.array(ps)
    ys = np.array(ys)
    if len(ys) < 12:
        raise SimError("threshold fit needs at least four points per distance")

    def solve(p_th: float, nu: float):
        x = (ps - p_th) * ds ** (1.0 / nu)
        design = np.stack([np.ones_like(x), x, x * x], axis=1)
        if np.linalg.matrix_rank(design) < 3:
            return None, np.inf
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        resid = float(((design @ coef - ys) ** 2).sum())
        return coef, resid

    best = (np.inf, None, None, None)
    for p_th in np.linspace(ps.min(), ps.max(), 81):
        for nu in np.linspace(0.6, 3.0, 49):
            coef, resid = solve(p_th, nu)
            if resid < best[0]:
                best = (resid, p_th, nu, coef)
    if best[3] is None:
        raise SimError("degenerate threshold fit")
    # local refinement around the best grid cell
    from scipy.optimize import minimize

    def objective(v):
        return solve(v[0], max(v[1], 0.05))[1]

    res = minimize(objective, [best[1], best[2]], method="Nelder-Mead")
    p_th, nu = float(res.x[0]), float(max(res.x[1], 0.05))
    coef, resid = solve(p_th, nu)
    if coef is None or not np.isfinite(resid):
        raise SimError("degenerate threshold fit")
    scale = max(abs(ys).max(), 1e-12)
    if abs(coef[1]) < 1e-9 * scale and abs(coef[2]) < 1e-9 * scale:
        raise SimError("degenerate threshold fit: no distance dependence")
    return ThresholdFit(
        p_th,
        nu,
        float(coef[0]),
        float(coef[1]),
        float(coef[2]),
        resid,
        tuple(sorted(usable)),
        caveat,
    )
