"""Experiment drivers: the coupled leapfrog loop, blow-up classification,
bisection for the empirical critical step, the channel-flow convergence
study, and the vibrating-membrane demo.

A run is classified from the trace of relative kinetic energy.  The
reference for "relative" is the peak energy over a short warmup window
(50 steps or a tenth of the run, whichever is smaller): runs that start
from rest have zero initial energy, and the injection transient of the
first few steps must not count as blow-up.

A run is unstable once the energy exceeds 1e3 times the reference or
stops being finite.  It is also unstable when the trace settles onto a
flat plateau strictly above the reference: with moving-position
spreading an unstable mode stops growing once the markers shift their
own stencils (the coupling detunes geometrically), but a passive run
can never hold its energy above its own injection peak, so a sustained
plateau there is unambiguous.  A run is stable if it finishes at or
below the reference with a non-increasing trailing envelope; anything
else is indeterminate, which the bisection treats as "run longer and
look again" because near-critical runs can decay (or grow secularly)
for thousands of steps before showing their hand.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .coupling import LagrangianSheet, interpolate, spread
from .fluid import StokesSolver, advect, energy, project_divergence_free
from .forcing import (ForcingModel, membrane_force, membrane_step,
                      target_force_update)

BLOWUP_FACTOR = 1.0e3
TRAIL_FRACTION = 0.10
TRAIL_SLACK = 1.05
HORIZON_CAP = 4
WARMUP_STEPS = 50

_FORCINGS = ("target", "membrane")
_DELTA_MODES = ("fixed", "moving")
_INITS = ("gaussian", "zero", "membrane_perturbation", "poiseuille")

def _envelope_ratio(window):
    """Peak of the second half of a trace window over the peak of the
    first half; 1.0 for degenerate windows."""
    half = len(window) // 2
    if half == 0:
        return 1.0
    first = float(np.max(window[:half]))
    second = float(np.max(window[half:]))
    if first <= 0.0:
        return 1.0 if second <= 0.0 else np.inf
    return second / first


def _saturated(window):
    """True when the window is a flat plateau strictly above the
    reference level: the signature of an instability that stopped
    growing because the markers moved their own stencils."""
    ratio = _envelope_ratio(window)
    return bool(np.min(window) > 1.0
                and 1.0 / TRAIL_SLACK <= ratio <= TRAIL_SLACK)


_INT_KEYS = {"n", "p", "steps", "seed", "record_every"}
_FLOAT_KEYS = {"l", "rho", "mu", "k", "dt", "eps1", "eps2", "eps3",
               "amplitude", "f0"}
_ENUM_KEYS = {"forcing": _FORCINGS, "delta_mode": _DELTA_MODES, "init": _INITS}
_BOOL_KEYS = {"nonlinear"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | set(_ENUM_KEYS) | _BOOL_KEYS


@dataclass
class SimConfig:
    n: int = 32
    p: int = 2
    l: float = 1.0
    rho: float = 1.0
    mu: float = 0.01
    k: float = 8.0e4
    dt: float = 1.0e-3
    steps: int = 5000
    forcing: str = "target"
    delta_mode: str = "fixed"
    eps: tuple = (0.0, 0.0, 0.0)
    nonlinear: bool = False
    init: str = "gaussian"
    amplitude: float = 0.01
    f0: float = 0.0
    seed: int = 0
    record_every: int = 1

    def validate(self):
        if self.n < 4 or int(self.n) != self.n:
            raise ValueError("n must be an integer >= 4")
        if self.p < 1 or int(self.p) != self.p:
            raise ValueError("p must be an integer >= 1")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if self.steps <= 0:
            raise ValueError("steps must be positive")
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be nonnegative")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.forcing not in _FORCINGS:
            raise ValueError("forcing must be one of " + "|".join(_FORCINGS))
        if self.delta_mode not in _DELTA_MODES:
            raise ValueError("delta_mode must be one of " + "|".join(_DELTA_MODES))
        if self.init not in _INITS:
            raise ValueError("init must be one of " + "|".join(_INITS))
        return self


def parse_config(path):
    """Read a flat key = value config file into a SimConfig.

    Blank lines and lines starting with '#' are skipped; any key outside
    the documented set is an error.
    """
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            key, _, val = line.partition("=")
            key, val = key.strip().lower(), val.strip()
            if key not in _ALL_KEYS:
                raise ValueError(f"line {lineno}: unknown config key '{key}'")
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _BOOL_KEYS:
                if val.lower() not in ("true", "false"):
                    raise ValueError(f"line {lineno}: {key} must be true or false")
                values[key] = val.lower() == "true"
            else:
                if val not in _ENUM_KEYS[key]:
                    raise ValueError(f"line {lineno}: {key} must be one of "
                                     + "|".join(_ENUM_KEYS[key]))
                values[key] = val
    eps = (values.pop("eps1", 0.0), values.pop("eps2", 0.0),
           values.pop("eps3", 0.0))
    cfg = SimConfig(eps=eps, **values)
    return cfg.validate()


@dataclass
class RunVerdict:
    status: str
    final_relative_energy: float
    blowup_step: int | None
    trace: np.ndarray
    energies: np.ndarray = None
    final_u: np.ndarray = None
    final_markers: np.ndarray = None
    snapshots: list = None


def _initial_velocity(cfg, h):
    n = cfg.n
    shape = (3, n, n, n)
    if cfg.init == "gaussian":
        rng = np.random.default_rng(cfg.seed)
        u = project_divergence_free(rng.standard_normal(shape), h)
        e = energy(u, h)
        if e > 0.0 and cfg.amplitude > 0.0:
            u *= cfg.amplitude / e
        return u
    if cfg.init == "poiseuille":
        u = np.zeros(shape)
        z = np.arange(n) * h
        profile = (cfg.f0 / (2.0 * cfg.mu)) * z * (cfg.l - z) if cfg.mu > 0 else 0.0 * z
        u[0] = profile[None, None, :]
        return u
    return np.zeros(shape)


def _initial_positions(cfg, sheet):
    x = sheet.x0.copy()
    if cfg.init == "membrane_perturbation" and cfg.amplitude > 0.0:
        s1 = sheet.x0[0] / cfg.l
        s2 = sheet.x0[1] / cfg.l
        x[2] += cfg.amplitude * (np.sin(2.0 * np.pi * (3.0 * s1 + 4.0 * s2))
                                 + np.cos(2.0 * np.pi * s2))
    return x


def run(config, capture_membrane=0):
    """Execute the leapfrog loop and classify the outcome.

    Each step: interpolate the velocity to the markers, advance the
    boundary state by half a period, spread the resulting forces, and
    take one projected trapezoidal fluid step.  When capture_membrane
    is positive and the forcing is membrane, marker positions are
    snapshotted every that many steps.
    """
    config.validate()
    n, p, l = config.n, config.p, config.l
    h = l / n
    sheet = LagrangianSheet(n, p, config.eps, l)
    solver = StokesSolver(n, h, config.rho, config.mu)
    model = ForcingModel(config.forcing, config.k, config.delta_mode)
    moving = model.kind == "membrane" and model.delta_mode == "moving"

    u = _initial_velocity(config, h)
    u_hat = solver.transform(u)
    if model.kind == "membrane":
        x = _initial_positions(config, sheet)
        markers_state = x
    else:
        forces = np.zeros((3, n * p, n * p))
        markers_state = forces

    body = None
    if config.f0 != 0.0:
        body = np.zeros((3, n, n, n))
        body[0] = config.f0

    warm = min(WARMUP_STEPS, max(1, config.steps // 10))
    ref = energy(u, h)
    e = ref
    trace = [(0, 0.0, 1.0 if ref > 0.0 else 0.0)]
    abs_energy = [e]
    snapshots = []
    if capture_membrane > 0 and model.kind == "membrane":
        snapshots.append((0, x.copy()))

    status, blow = None, None
    for step in range(1, config.steps + 1):
        if model.kind == "target":
            u_markers = interpolate(sheet, u)
            forces = target_force_update(forces, u_markers, config.k, config.dt)
            f = spread(sheet, forces)
            markers_state = forces
        else:
            pos = x if moving else None
            u_markers = interpolate(sheet, u, positions=pos)
            x = membrane_step(x, u_markers, config.dt)
            f = spread(sheet, membrane_force(x, config.k, sheet.h_b, l),
                       positions=(x if moving else None))
            markers_state = x
        if config.nonlinear:
            f += config.rho * advect(u, h)
        if body is not None:
            f += body
        u, u_hat = solver.step_hat(u_hat, f, config.dt)

        # blow-up drives |u| past the floating range by design, so the
        # overflow that precedes the non-finite check is not a fault
        with np.errstate(over="ignore", invalid="ignore"):
            e = energy(u, h)
        if step <= warm and np.isfinite(e):
            ref = max(ref, e)
        rel = e / ref if ref > 0.0 else 0.0
        if step % config.record_every == 0 or step == config.steps:
            trace.append((step, step * config.dt, rel))
            abs_energy.append(e)
            if step >= 10 * warm and len(trace) >= 64 \
                    and len(trace) % 32 == 0:
                win = np.array([row[2] for row in
                                trace[-max(10, len(trace) // 5):]])
                if _saturated(win):
                    status = "unstable"
                    break
        if capture_membrane > 0 and model.kind == "membrane" \
                and step % capture_membrane == 0:
            snapshots.append((step, x.copy()))
        if not np.isfinite(e) or rel > BLOWUP_FACTOR:
            status, blow = "unstable", step
            if trace[-1][0] != step:
                trace.append((step, step * config.dt, rel))
                abs_energy.append(e)
            break

    trace = np.array(trace)
    rels = trace[:, 2]
    if status is None:
        # Judge the trailing window by its oscillation envelope: the least
        # damped coupled mode sits at zero fluid wavenumber where viscosity
        # cannot reach it, so a stable near-critical run rings (and beats
        # against slower-decaying neighbours) instead of decaying sample by
        # sample.  Compare the peak of the second half of the window against
        # the first half: ringing passes within the slack, while genuine
        # growth just past the boundary runs several percent per step and
        # multiplies many times over across half a window.  A flat window
        # pinned above the reference is a saturated instability; a rising
        # one (secular growth at the boundary itself) stays indeterminate.
        tail = rels[int(np.floor(len(rels) * (1.0 - TRAIL_FRACTION))):]
        if _saturated(tail):
            status = "unstable"
        elif rels[-1] <= 1.0 and _envelope_ratio(tail) <= TRAIL_SLACK:
            status = "stable"
        else:
            status = "indeterminate"
    return RunVerdict(status=status,
                      final_relative_energy=float(rels[-1]),
                      blowup_step=blow,
                      trace=trace,
                      energies=np.array(abs_energy),
                      final_u=u,
                      final_markers=markers_state,
                      snapshots=snapshots if snapshots else None)


@dataclass
class CriticalDtResult:
    dt_critical: float
    per_seed: list
    bracket: tuple
    seeds: list = None


def _classify(config, dt):
    """Run at the given step size, lengthening the horizon on an
    indeterminate verdict up to HORIZON_CAP times the configured run."""
    steps = config.steps
    while True:
        verdict = run(replace(config, dt=dt, steps=steps))
        if verdict.status != "indeterminate":
            return verdict.status
        if steps >= config.steps * HORIZON_CAP:
            raise RuntimeError(
                f"indeterminate verdict at dt={dt!r} with horizon cap reached")
        steps = min(steps * 2, config.steps * HORIZON_CAP)


def find_critical_dt(config, dt_lo, dt_hi, rel_tol=1e-3, n_seeds=1):
    """Bisect the stability boundary between a stable and an unstable step.

    With a random initial field the search repeats over n_seeds seeds and
    the result is the per-seed average, following the experimental
    protocol the predictions are checked against.
    """
    if not (0.0 < dt_lo < dt_hi):
        raise ValueError("need 0 < dt_lo < dt_hi")
    if not rel_tol > 0.0:
        raise ValueError("rel_tol must be positive")
    seeds = [config.seed + i for i in range(n_seeds)] \
        if config.init == "gaussian" else [config.seed]
    per_seed = []
    bracket = (dt_lo, dt_hi)
    for seed in seeds:
        cfg = replace(config, seed=seed)
        lo, hi = dt_lo, dt_hi
        if _classify(cfg, lo) != "stable":
            raise ValueError(f"lower bracket dt={lo!r} is not stable")
        if _classify(cfg, hi) != "unstable":
            raise ValueError(f"upper bracket dt={hi!r} is not unstable")
        while hi - lo > rel_tol * 0.5 * (hi + lo):
            # A query can land so close to the boundary that it is marginal
            # at every allowed horizon (the mode there grows secularly, not
            # exponentially).  That zone is orders of magnitude narrower
            # than any bracket we resolve, so step off it and carry on.
            status = None
            for frac in (0.5, 0.497, 0.503, 0.489, 0.511):
                mid = lo + frac * (hi - lo)
                try:
                    status = _classify(cfg, mid)
                    break
                except RuntimeError:
                    continue
            if status is None:
                raise RuntimeError(
                    f"bisection pinned at a marginal step near dt={mid!r}")
            if status == "stable":
                lo = mid
            else:
                hi = mid
        per_seed.append(0.5 * (lo + hi))
        bracket = (lo, hi)
    return CriticalDtResult(dt_critical=float(np.mean(per_seed)),
                            per_seed=per_seed, bracket=bracket, seeds=seeds)


def _error_norms(err, dv):
    mag = np.sqrt((err * err).sum(axis=0))
    return (float(mag.sum() * dv),
            float(np.sqrt((mag ** 2).sum() * dv)),
            float(mag.max()))


def poiseuille_experiment(levels, n0=16, dt0=1.0 / 400.0, k0=8.0e4, p=2,
                          mu=0.1, f0=0.1, rho=1.0, l=1.0, end_time=None):
    """Channel-flow convergence study against the parabolic profile.

    One no-slip plane of target markers sits at z = 0 (its periodic image
    is the z = L lid), a uniform body force f0 drives the x direction,
    and the run starts from the analytic steady state
    u_x(z) = (f0 / 2 mu) z (L - z).  Each refinement halves the meshwidth
    and the step and doubles the stiffness.  Returns one row per level:
    (N, u error L1/L2/Linf, marker displacement L1/L2/Linf), where the
    displacement is recovered from the accumulated spring force as
    d = -F/K.
    """
    if levels < 2:
        raise ValueError("need at least two levels")
    if n0 < 16:
        raise ValueError("base grid must be at least 16")
    if end_time is None:
        end_time = 2.0 * l * l / mu
    rows = []
    for m in range(levels):
        n = n0 * 2**m
        k = k0 * 2**m
        dt = dt0 / 2**m
        steps = int(np.ceil(end_time / dt))
        cfg = SimConfig(n=n, p=p, l=l, rho=rho, mu=mu, k=k, dt=dt,
                        steps=steps, forcing="target", init="poiseuille",
                        f0=f0, record_every=max(1, steps // 20))
        verdict = run(cfg)
        h = l / n
        z = np.arange(n) * h
        ua = np.zeros((3, n, n, n))
        ua[0] = ((f0 / (2.0 * mu)) * z * (l - z))[None, None, :]
        eu = _error_norms(verdict.final_u - ua, h**3)
        d = -verdict.final_markers / k
        ed = _error_norms(d, (l / (n * p)) ** 2)
        rows.append((n, *eu, *ed))
    return rows


def membrane_demo(config=None, capture_every=None):
    """Let a perturbed membrane ring down and record how it settles.

    Returns a dict with the run verdict, position snapshots, the maximum
    height deviation per snapshot, and the total (kinetic + elastic)
    energy per snapshot.
    """
    if config is None:
        config = SimConfig(n=32, p=2, mu=0.25, k=100.0, dt=1.0e-3,
                           steps=4000, forcing="membrane",
                           delta_mode="moving", init="membrane_perturbation",
                           amplitude=0.01)
    if config.forcing != "membrane":
        raise ValueError("membrane_demo needs membrane forcing")
    if capture_every is None:
        capture_every = max(1, config.steps // 100)
    verdict = run(config, capture_membrane=capture_every)
    sheet = LagrangianSheet(config.n, config.p, config.eps, config.l)
    sigma3 = config.eps[2] * (config.l / config.n)
    heights = []
    total_energy = []
    h = config.l / config.n
    for step, x in verdict.snapshots:
        heights.append((step, float(np.abs(x[2] - sigma3).max())))
        d1 = np.roll(x, -1, axis=1) - x
        d1 -= config.l * np.round(d1 / config.l)
        d2 = np.roll(x, -1, axis=2) - x
        d2 -= config.l * np.round(d2 / config.l)
        d1[0] -= sheet.h_b
        d2[1] -= sheet.h_b
        elastic = 0.5 * config.k * float((d1 * d1).sum() + (d2 * d2).sum())
        idx = np.searchsorted(verdict.trace[:, 0], step)
        kinetic = 0.5 * config.rho * float(verdict.energies[idx]) ** 2
        total_energy.append((step, kinetic + elastic))
    return {"verdict": verdict,
            "snapshots": verdict.snapshots,
            "max_height": np.array(heights),
            "total_energy": np.array(total_energy)}
