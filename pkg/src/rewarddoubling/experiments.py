"""Experiment wiring shared by the CLI: learner construction, bound reports,
verification suites and the comparator-regime comparison behind ``table1``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import adversaries as adv
from . import bounds as bd
from .baselines import (FixedFTRL, GradientDescent, LossFeed, ProjectedGradientDescent,
                        UnnormalizedEG, gd_reward_closed_form, gd_standard_regret_bound,
                        quadratic)
from .core import Comparator, Trace, ZeroLearner, regret, run
from .multidim import comparator_grid, regret_decomposition, reward_doubling
from .onedim import (SMOOTH_OVERHEAD, RewardDoubling1D, RewardDoubling1DGuess,
                     SmoothRewardDoubling, eps_series, rd1d_reward_floor, smooth_reward_floor,
                     verify_smooth_lemmas)

ALGORITHMS = ("rd1d", "guess", "smooth", "rd", "gd", "pgd", "eg", "ftrl", "zero")
SUITES = ("lemma1", "lemma2", "thm2", "thm3", "thm4", "lemma-p", "thm7", "duality",
          "smooth-lemmas")
DEFAULT_TOLERANCE = 1e-9


@dataclass
class ExperimentSpec:
    """Everything that determines a ``simulate`` run."""

    alg: str
    sequence: adv.SequenceSpec
    params: dict = field(default_factory=dict)
    comparators: list = field(default_factory=lambda: [0.0])
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = 0
    out: str = "."

    def __post_init__(self):
        if self.alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.alg!r}; choose from {ALGORITHMS}")

    @property
    def dim(self) -> int | None:
        return self.params.get("dim")

    def dump(self) -> str:
        lines = [f"alg={self.alg}"]
        lines += [f"{k}={v}" for k, v in sorted(self.params.items())]
        s = self.sequence
        lines += [f"seq={s.kind}", f"T={s.T}", f"seq_seed={s.seed}",
                  f"comparators={','.join(repr(float(c)) for c in self.comparators)}",
                  f"tolerance={self.tolerance!r}", f"seed={self.seed}", f"out={self.out}",
                  f"rng={adv.RNG_NAME}"]
        return "\n".join(lines) + "\n"


def build_learner(alg: str, params: dict, T: int):
    p = params
    dim = p.get("dim")
    if alg == "rd1d":
        return RewardDoubling1D(p.get("eta1"), p.get("hbar"), T=T)
    if alg == "guess":
        return RewardDoubling1DGuess(p.get("eps", 1.0))
    if alg == "smooth":
        return SmoothRewardDoubling(p.get("eta", 1.0))
    if alg == "rd":
        return reward_doubling(dim or 1, p.get("eps", 1.0), p.get("schedule", "uniform"))
    if alg == "gd":
        return GradientDescent(p.get("eta", 1.0), dim)
    if alg == "pgd":
        radius = p.get("radius", 1.0)
        eta = p.get("eta") or radius / math.sqrt(max(T, 1))
        return ProjectedGradientDescent(eta, radius, dim)
    if alg == "eg":
        eta = p.get("eta") or p.get("radius", 1.0) / math.sqrt(max(T, 1))
        return LossFeed(UnnormalizedEG(eta, dim))
    if alg == "ftrl":
        return FixedFTRL(quadratic(p.get("eta", 0.1)), p.get("convention", "loss"))
    return ZeroLearner(dim)


def _comparator_point(c, dim):
    return np.full(dim, float(c)) if dim else float(c)


def bound_reports(spec: ExperimentSpec, trace: Trace, learner) -> list[bd.BoundReport]:
    """Measured-vs-bound rows for ``trace`` according to the algorithm's guarantees."""
    alg, T = spec.alg, trace.T
    seq = spec.sequence.kind
    out: list[bd.BoundReport] = []
    reward_total = trace.cumulative_reward
    G = float(np.abs(trace.gradient_sum).sum())
    H_i = trace.squared_gradient_sum
    H = float(H_i.sum())

    def row(name, measured, bound, comp="", asserted=True, identity=False):
        out.append(bd.BoundReport(name, float(measured), float(bound), alg, seq, str(comp),
                                  asserted, identity))

    if alg == "rd1d":
        ok = H <= learner.hbar
        tag = "" if ok else "[precondition_failed]"
        row("rd1d_reward_floor(neg)" + tag, -reward_total,
            -rd1d_reward_floor(learner.eta1, learner.hbar, G), asserted=ok)
    if alg == "smooth" and T:
        Gt = np.abs(np.cumsum(trace.gradients))
        t = np.arange(1, T + 1)
        floor = smooth_reward_floor(learner.eta, Gt, t)
        slack = trace.reward_cum - floor
        scaled = slack / np.maximum(1.0, np.abs(floor))
        j = int(np.argmin(scaled))
        row(f"smooth_reward_floor(neg)@round{j + 1}", -trace.reward_cum[j], -floor[j])
    if alg == "gd" and trace.dim == 1:
        row("gd_reward_identity", reward_total, gd_reward_closed_form(learner.eta, G, H),
            identity=True)

    for c in spec.comparators:
        point = _comparator_point(c, trace.dim if trace.dim > 1 else None)
        comp = Comparator(point)
        measured = regret(trace, comp)
        Rabs = comp.l2_norm
        if alg == "rd1d":
            ok = H <= learner.hbar
            tag = "" if ok else "[precondition_failed]"
            row("rd1d_regret_dual" + tag, measured,
                bd.rd1d_regret_bound_dual(learner.eta1, learner.hbar, Rabs), c, asserted=ok)
            loose = ok and learner.hbar >= 1
            row("rd1d_regret" + (tag or ("" if loose else "[hbar_below_1]")), measured,
                bd.rd1d_regret_bound(learner.eta1, learner.hbar, Rabs), c, asserted=loose)
        elif alg == "guess":
            row("guess_regret", measured, bd.guess_regret_bound(learner.eps, H, Rabs), c)
        elif alg == "smooth":
            row("smooth_regret[reported]", measured, bd.smooth_regret_bound(learner.eta, Rabs, max(T, 1)),
                c, asserted=False)
        elif alg == "rd":
            b1, b2 = bd.ndim_regret_bound(learner.eps_total, H_i, comp.point, trace.dim)
            row("coordinate_regret", measured, b1, c)
            row("euclidean_regret[reported]", measured, b2, c, asserted=False)
            valid = bd.euclidean_form_valid(learner.eps_total, H_i, comp.point, trace.dim)
            row("euclidean_vs_coordinate_bound" + ("" if valid else "[outside_valid_domain]"),
                b1, b2, c, asserted=valid)
        elif alg == "gd":
            row("gd_standard_regret", measured, gd_standard_regret_bound(learner.eta, Rabs, H), c)
        elif alg == "pgd" and Rabs <= learner.radius:
            row("pgd_standard_regret", measured, gd_standard_regret_bound(learner.eta, Rabs, H), c)
        else:
            row("regret[measured_only]", measured, math.nan, c, asserted=False)
    return out


def simulate(spec: ExperimentSpec, gradients=None) -> tuple[Trace, list[bd.BoundReport]]:
    gradients = spec.sequence.generate() if gradients is None else gradients
    T = len(gradients)
    learner = build_learner(spec.alg, spec.params, T)
    trace = run(learner, gradients)
    return trace, bound_reports(spec, trace, learner)


# --- verification suites -------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    worst_margin: float = math.nan
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        margin = "" if math.isnan(self.worst_margin) else f" (worst margin {self.worst_margin:.6g})"
        detail = f" [{self.detail}]" if self.detail else ""
        return f"{self.name}: {tag}{margin}{detail}"


def suite_lemma1(reps: int = 1000, T: int = 200, etas=(0.01, 0.1, 1.0), seed: int = 0,
                 tol: float = 1e-9) -> list[Check]:
    worst = 0.0
    bad = 0
    for r in range(reps):
        g = adv.rademacher(T, seed + r)
        G = float(g.sum())
        H = float(np.dot(g, g))
        for eta in etas:
            got = run(GradientDescent(eta), g).cumulative_reward
            want = gd_reward_closed_form(eta, G, H)
            err = abs(got - want) / max(abs(want), eta * H)
            worst = max(worst, err)
            bad += err > tol
    return [Check(f"lemma1: {reps * len(etas)} GD reward identity checks", bad == 0, -worst,
                  f"max relative error {worst:.3g}")]


def suite_lemma2(reps: int = 500, Ts=(100, 1000), seed: int = 0, tol: float = 1e-9) -> list[Check]:
    worst = math.inf
    epoch_ok = True
    for T in Ts:
        seqs = [adv.rademacher(T, seed + r) for r in range(reps)] + [adv.all_ones(T)]
        for g in seqs:
            lr = RewardDoubling1D(T=T, record=True)
            trace = run(lr, g)
            floor = rd1d_reward_floor(lr.eta1, lr.hbar, abs(float(g.sum())))
            worst = min(worst, trace.cumulative_reward - floor)
            epoch_ok &= _epochs_sound(lr)
    return [Check("lemma2: reward floor of Reward-Doubling-1D", worst >= -tol, worst),
            Check("lemma2: epochs close exactly when Q reaches eta_i * hbar", epoch_ok)]


def _epochs_sound(lr: RewardDoubling1D) -> bool:
    closed = {e for e, _, _ in lr.closed}
    log = lr.log
    for j, (e, q) in enumerate(log):
        thr = lr.eta1 * 2.0 ** (e - 1) * lr.hbar
        last_of_epoch = j + 1 == len(log) or log[j + 1][0] != e
        if last_of_epoch and e in closed:
            if q < thr:
                return False
        elif q >= thr:
            return False
    return True


def guess_runs(reps: int = 500, T: int = 10_000, eps: float = 1.0, seed: int = 0):
    """Traces of Reward-Doubling-1D-Guess on seeded Rademacher sequences."""
    return [run(RewardDoubling1DGuess(eps), adv.rademacher(T, seed + r)) for r in range(reps)]


def suite_thm2(reps: int = 500, T: int = 10_000, eps: float = 1.0, seed: int = 0,
               comparators=(0.1, -0.1, 1.0, -1.0, 10.0, -10.0), tol: float = 1e-9) -> list[Check]:
    traces = guess_runs(reps, T, eps, seed)
    origin = max(-tr.cumulative_reward for tr in traces)
    worst = math.inf
    for tr in traces:
        H = float(tr.squared_gradient_sum[0])
        for c in comparators:
            b = bd.guess_regret_bound(eps, H, abs(c))
            worst = min(worst, b - regret(tr, c))
    return [Check(f"thm2: origin-regret <= eps={eps:g}", origin <= eps + tol, eps - origin,
                  f"max origin-regret {origin:.6g}"),
            Check("thm2: regret bound on comparator grid", worst >= -tol, worst)]


def suite_thm3(n: int = 10, T: int = 1000, reps: int = 5, eps: float = 1.0, seed: int = 0,
               n_comparators: int = 20, tol: float = 1e-9) -> list[Check]:
    exact = True
    worst = math.inf
    worst_chain = math.inf
    skipped = 0
    comps = comparator_grid(n, n_comparators, seed)
    for r in range(reps):
        g = adv.mixed_vector(T, n, seed + r)
        tr = run(reward_doubling(n, eps), g)
        H_i = tr.squared_gradient_sum
        for c in comps:
            parts = regret_decomposition(tr, c)
            total = 0.0
            for v in parts:
                total += v
            exact &= total == regret(tr, c)
            b1, b2 = bd.ndim_regret_bound(eps, H_i, c.point, n)
            worst = min(worst, b1 - regret(tr, c))
            if bd.euclidean_form_valid(eps, H_i, c.point, n):
                worst_chain = min(worst_chain, b2 - b1)
            else:
                skipped += 1
    return [Check("thm3: per-coordinate regrets sum exactly to total regret", exact),
            Check("thm3: coordinate-sum regret bound", worst >= -tol, worst),
            Check("thm3: Euclidean form dominates coordinate form where ||x||_2 >= 1",
                  worst_chain >= -tol, worst_chain, f"{skipped} comparator cases outside that domain")]


def smooth_floor_margin(trace: Trace, eta: float) -> float:
    """Smallest scaled slack of the per-round smooth reward floor."""
    Gt = np.abs(np.cumsum(trace.gradients))
    t = np.arange(1, trace.T + 1)
    floor = smooth_reward_floor(eta, Gt, t)
    return float(np.min((trace.reward_cum - floor) / np.maximum(1.0, np.abs(floor))))


def suite_thm4(reps: int = 200, T: int = 10_000, eta: float = 1.0, seed: int = 0,
               tol: float = 1e-9) -> list[Check]:
    seqs = [adv.rademacher(T, seed + r) for r in range(reps)]
    seqs += [adv.all_ones(T), adv.alternating(T)]
    worst = min(smooth_floor_margin(run(SmoothRewardDoubling(eta), g), eta) for g in seqs)
    return [Check(f"thm4: per-round reward floor (-{SMOOTH_OVERHEAD:g} eta)", worst >= -tol, worst)]


def suite_lemma_p() -> list[Check]:
    p6 = adv.binom_tail_bruteforce(6, math.sqrt(6))
    checks = [Check(f"lemma-p: P[G_6 >= sqrt(6)] = {p6} exact", p6 == Fraction(7, 64))]
    p = Fraction(7, 64)
    for m in (1, 2, 3):
        T = 6 * m
        prob = adv.binom_tail_bruteforce(T, math.sqrt(m * T))
        checks.append(Check(f"lemma-p: P[G_{T} >= sqrt({m}*{T})] = {prob} >= p^{m}", prob >= p ** m,
                            float(prob - p ** m)))
    return checks


def ftrl_killer_check(T: int, eta: float = 0.1, convention: str = "reward") -> tuple[float, float, float]:
    """Run quadratic FTRL on both killer sequences.

    Returns ``(eps_T, regret, floor)`` where ``eps_T`` is the origin-regret
    measured on the first sequence and ``regret`` is measured on the second
    against ``xo = 2 eps_T + 1``.
    """
    s1, s2 = adv.ftrl_bad_sequences(T)
    eps_T = -run(FixedFTRL(quadratic(eta), convention), s1).cumulative_reward
    x = 2 * eps_T + 1
    reg = regret(run(FixedFTRL(quadratic(eta), convention), s2), x)
    return eps_T, reg, bd.ftrl_bad_regret_floor(T, abs(x), eps_T)


def suite_thm7(Ts=(100, 1000), eta: float = 0.1, tol: float = 1e-9) -> list[Check]:
    checks = []
    for T in Ts:
        eps_T, reg, floor = ftrl_killer_check(T, eta, "reward")
        worst_origin = eta * (T // 2)
        checks.append(Check(f"thm7: T={T} reward-convention FTRL regret >= (T-1)/2 (|x|-eps_T)",
                            reg >= floor - tol and eps_T <= worst_origin + tol, reg - floor,
                            f"eps_T={eps_T:.6g}, regret={reg:.6g}, floor={floor:.6g}"))
        # Literal argmin convention: sequence 1 yields negative origin-regret, so eps_T is
        # taken as the worst case over all sequences, (eta/2)(T^2 - T).
        eps_lit = 0.5 * eta * (T * T - T)
        s1, s2 = adv.ftrl_bad_sequences(T)
        x = 2 * eps_lit + 1
        reg_lit = max(regret(run(FixedFTRL(quadratic(eta), "loss"), s), x) for s in (s2, -s2))
        floor_lit = bd.ftrl_bad_regret_floor(T, x, eps_lit)
        checks.append(Check(f"thm7: T={T} literal-convention FTRL (worst-case eps_T)",
                            reg_lit >= floor_lit - tol, reg_lit - floor_lit))
    return checks


def duality_grid(kappas=None, gammas=None, epss=(0.0, 0.5, 1.0)):
    kappas = np.logspace(-2, 1, 10) if kappas is None else kappas
    gammas = np.logspace(-2, 0, 10) if gammas is None else gammas
    for k in kappas:
        for g in gammas:
            for e in epss:
                yield bd.RewardBoundParams(float(k), float(g), float(e))


def suite_duality(tol: float = 1e-9) -> list[Check]:
    n = 0
    bad = 0
    worst_gap = 0.0
    for params in duality_grid():
        for c in bd.duality_roundtrip_check(params):
            n += 1
            bad += not c.ok
            worst_gap = max(worst_gap, abs(c.value_gap) / max(1.0, abs(c.closed_form)))
    return [Check(f"duality: {n} grid argmax checks within one step", bad == 0, -worst_gap,
                  f"max relative value gap {worst_gap:.3g}")]


def suite_smooth_lemmas(tau_max: int = 1000, step: float = 0.01, series_T: int = 10 ** 6) -> list[Check]:
    rep = verify_smooth_lemmas(tau_max=tau_max, step=step)
    s = eps_series(series_T)
    peak = float(s.max())
    return [Check(f"smooth-lemmas: rinv on {rep.points['rinv']} points",
                  not any(v.lemma == "rinv" for v in rep.violations), rep.worst_margin("rinv")),
            Check(f"smooth-lemmas: od on {rep.points['od']} points",
                  not any(v.lemma == "od" for v in rep.violations), rep.worst_margin("od")),
            Check(f"smooth-lemmas: eps series partial sums <= {SMOOTH_OVERHEAD:g} up to T={series_T}",
                  peak <= SMOOTH_OVERHEAD, SMOOTH_OVERHEAD - peak, f"max partial sum {peak:.6g}")]


SUITE_FUNCS = {
    "lemma1": suite_lemma1, "lemma2": suite_lemma2, "thm2": suite_thm2, "thm3": suite_thm3,
    "thm4": suite_thm4, "lemma-p": suite_lemma_p, "thm7": suite_thm7, "duality": suite_duality,
    "smooth-lemmas": suite_smooth_lemmas,
}


def verify(suite: str) -> list[Check]:
    if suite not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    return SUITE_FUNCS[suite]()


# --- comparator-regime comparison (table1) -----------------------------------

@dataclass
class TableRow:
    regime: str
    algorithm: str
    sequence: str
    T: int
    comparator_norm: float
    measured: float
    bound_name: str
    bound: float


def _table_learners(R, T, n, eps):
    dim = n if n > 1 else None
    return {
        "reward_doubling": lambda: reward_doubling(n, eps) if n > 1 else RewardDoubling1DGuess(eps),
        "projected_gd": lambda: ProjectedGradientDescent.tuned(R, T, dim),
        "eg_unnormalized": lambda: LossFeed(UnnormalizedEG(R / math.sqrt(T), dim)),
    }


def _table_bound(alg, trace, comp, R, T, n, eps):
    H_i = trace.squared_gradient_sum
    if alg == "reward_doubling":
        if n > 1:
            return "coordinate_regret", bd.ndim_regret_bound(eps, H_i, comp.point, n)[0]
        return "guess_regret", bd.guess_regret_bound(eps, float(H_i[0]), comp.l2_norm)
    if alg == "projected_gd" and comp.l2_norm <= R + 1e-12:
        return "pgd_standard_regret", gd_standard_regret_bound(R / math.sqrt(T), comp.l2_norm,
                                                               float(H_i.sum()))
    if alg == "eg_unnormalized":
        return "eg_order_only", bd.eg_table_order(R, T, n)
    return "none", math.nan


def table1(R: float = 1.0, T: int = 10_000, n: int = 1, eps: float = 1.0, seed: int = 0,
           ladder: int = 3) -> tuple[list[TableRow], list[Check]]:
    """Measured regret of Reward-Doubling, projected GD and unnormalized EG in
    three comparator regimes over the horizons ``T/10^(ladder-1), ..., T``.

    Regimes: ``origin`` (xo = 0) on alternating and balanced-Rademacher
    sequences; ``ball`` (|xo| = R) and ``beyond`` (|xo| = 2R) on all-ones and
    balanced-Rademacher sequences.  Vector comparators point along the
    all-ones direction; scalar sequences are replicated over coordinates.
    """
    horizons = sorted({max(2, T // 10 ** j) for j in range(ladder)})
    unit = np.ones(n) / math.sqrt(n)
    regimes = {"origin": 0.0, "ball": R, "beyond": 2 * R}
    seq_for = {"origin": ("alternating", "rademacher_balanced"),
               "ball": ("all_ones", "rademacher_balanced"),
               "beyond": ("all_ones", "rademacher_balanced")}
    rows: list[TableRow] = []
    for Th in horizons:
        learners = _table_learners(R, Th, n, eps)
        cache = {}
        for kind in ("alternating", "all_ones", "rademacher_balanced"):
            g = adv.SequenceSpec(kind, Th, seed).generate()
            g = g if n == 1 else np.repeat(g[:, None], n, axis=1)
            for name, make in learners.items():
                cache[(kind, name)] = run(make(), g)
        for regime, radius in regimes.items():
            comp = Comparator(radius * unit)
            for kind in seq_for[regime]:
                for name in learners:
                    tr = cache[(kind, name)]
                    bname, bval = _table_bound(name, tr, comp, R, Th, n, eps)
                    rows.append(TableRow(regime, name, kind, Th, comp.l2_norm,
                                         regret(tr, comp), bname, bval))
    return rows, table1_checks(rows, eps)


def _series(rows, regime, alg, seq):
    pts = sorted((r.T, r.measured) for r in rows
                 if r.regime == regime and r.algorithm == alg and r.sequence == seq)
    return np.array([p[0] for p in pts], float), np.array([p[1] for p in pts], float)


def _slope(Ts, vals):
    if len(Ts) < 2 or np.any(vals <= 0):
        return math.nan
    return float(np.polyfit(np.log(Ts), np.log(vals), 1)[0])


def table1_checks(rows: list[TableRow], eps: float, tol: float = 1e-9) -> list[Check]:
    checks = []
    origin_rd = max(r.measured for r in rows if r.regime == "origin" and r.algorithm == "reward_doubling")
    checks.append(Check(f"table1: Reward-Doubling origin-regret <= eps={eps:g}",
                        origin_rd <= eps + tol, eps - origin_rd))
    for alg in ("projected_gd", "eg_unnormalized"):
        for seq in ("alternating", "rademacher_balanced"):
            Ts, v = _series(rows, "origin", alg, seq)
            s = _slope(Ts, v)
            ok = not math.isnan(s) and 0.35 <= s <= 0.65 and bool(np.all(v > eps))
            checks.append(Check(f"table1: {alg} origin-regret grows like sqrt(T) on {seq}",
                                ok, detail=f"log-log slope {s:.3f}"))
    Ts, pgd = _series(rows, "beyond", "projected_gd", "all_ones")
    s = _slope(Ts, pgd)
    checks.append(Check("table1: projected GD regret linear in T for |x|=2R on all-ones",
                        not math.isnan(s) and s >= 0.9, detail=f"log-log slope {s:.3f}"))
    Ts, rd = _series(rows, "beyond", "reward_doubling", "all_ones")
    per_round = np.maximum(rd, 0.0) / Ts
    sub = bool(np.all(np.diff(per_round) <= 0)) and rd[-1] < pgd[-1]
    checks.append(Check("table1: Reward-Doubling regret sublinear for |x|=2R on all-ones", sub,
                        detail=f"regret/T {', '.join(f'{x:.3g}' for x in per_round)}"))
    return checks
