"""Seeded numerical checks of every identity and inequality the library relies on.

Each suite draws its own substream from the master seed, so adding or
reordering suites never changes another suite's samples. A suite is one of

* ``bound``: passes when the largest residual is at most the tolerance;
* ``search``: passes when some sample exceeds the tolerance (used for
  counterexamples and negativity witnesses).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .energetics import (
    EnergeticsConfig,
    energy_reports,
    quasiprob_distribution,
    requirement_residuals,
    sequence_energy_change,
    sequential_energy_chain,
    tpm_distribution,
)
from .errors import ZeroProbability
from .measurement import (
    KrausInstrument,
    MeasurementModel,
    Povm,
    RepeatableSpec,
    extend_model_commuting,
    make_ideal_model,
)
from .opcore import projector, spectral_decompose
from .scenarios import (
    haar_unitary,
    random_density,
    random_dims,
    random_hermitian,
    random_model,
    random_pure,
    random_pvm,
    rng_for,
)
from .thermo import projective_comparison, thermo_report
from .workstats import apparatus_energy_change, average_work, total_energy_change, work_reports

NEGATIVITY_TRIALS = 1000


@dataclass(frozen=True)
class SuiteResult:
    name: str
    kind: str
    trials: int
    max_residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerifyOptions:
    seed: int = 42
    trials: int = 200
    max_dim_S: int = 4
    max_dim_A: int = 4


def _seeds(rng: np.random.Generator, n: int) -> Iterator[int]:
    for _ in range(n):
        yield int(rng.integers(2**31))


def _random_commuting_model(seed: int, opts: VerifyOptions, energy_conserving: bool = False) -> MeasurementModel:
    rng = rng_for(seed)
    dS, dA, n = random_dims(rng, opts.max_dim_S, opts.max_dim_A)
    return random_model(seed, dS, dA, n, commuting_pointer=True, energy_conserving=energy_conserving)


def _random_any_model(seed: int, opts: VerifyOptions) -> MeasurementModel:
    rng = rng_for(seed)
    dS, dA, n = random_dims(rng, opts.max_dim_S, opts.max_dim_A)
    return random_model(seed, dS, dA, n)


def _ensemble(rng: np.random.Generator, d: int, k: int = 3):
    w = rng.dirichlet(np.ones(k))
    states = [random_density(rng, d) for _ in range(k)]
    return sum(p * s for p, s in zip(w, states)), list(zip(w, states))


# -- energetics ---------------------------------------------------------------


def _requirements(opts: VerifyOptions, rng, random_lambda: bool) -> Iterator:
    for seed in _seeds(rng, opts.trials):
        model = _random_any_model(seed, opts)
        sub = rng_for(seed, 1)
        rho, ens = _ensemble(sub, model.dim_S)
        cfg = EnergeticsConfig(lam=float(sub.random())) if random_lambda else EnergeticsConfig()
        yield requirement_residuals(model, rho, ens, cfg)


def suite_requirement1(opts, rng):
    return (r.req1 for r in _shared("requirements", opts))


def suite_requirement2(opts, rng):
    return (r.req2 for r in _shared("requirements", opts))


def suite_requirement1_family(opts, rng):
    return (r.req1 for r in _shared("requirements_family", opts))


def suite_requirement2_family(opts, rng):
    return (r.req2 for r in _shared("requirements_family", opts))


def suite_requirement3(opts, rng):
    # Lüders measurement of a coarse-graining of the energy eigenbasis
    for seed in _seeds(rng, opts.trials):
        sub = rng_for(seed)
        d = int(sub.integers(2, opts.max_dim_S + 1))
        V = haar_unitary(sub, d)
        H = (V * sub.integers(0, 3, size=d)) @ V.conj().T
        groups = np.array_split(sub.permutation(d), int(sub.integers(1, d + 1)))
        pvm = Povm(tuple(str(k) for k in range(len(groups))), [V[:, g] @ V[:, g].conj().T for g in groups])
        model = make_ideal_model(pvm, H, H)
        rho, ens = _ensemble(sub, d)
        res = requirement_residuals(model, rho, ens)
        if res.req3 is not None:
            yield res.req3


def _counterexample(opts, rng, definition, which):
    for seed in _seeds(rng, opts.trials):
        model = _random_any_model(seed, opts)
        rho, ens = _ensemble(rng_for(seed, 1), model.dim_S)
        yield getattr(requirement_residuals(model, rho, ens, definition=definition), which)


def suite_naive_violates_requirement1(opts, rng):
    return _counterexample(opts, rng, "naive", "req1")


def suite_reference_violates_requirement2(opts, rng):
    return _counterexample(opts, rng, "reference", "req2")


def _degenerate_hamiltonian(rng, d: int) -> np.ndarray:
    V = haar_unitary(rng, d)
    return (V * rng.integers(0, 2, size=d)) @ V.conj().T


def _random_process(seed: int, max_dim: int):
    sub = rng_for(seed)
    d = int(sub.integers(2, max_dim + 1))
    if sub.random() < 0.5:
        H0, Ht = random_hermitian(sub, d), random_hermitian(sub, d)
    else:
        H0, Ht = _degenerate_hamiltonian(sub, d), _degenerate_hamiltonian(sub, d)
    return haar_unitary(sub, d), H0, Ht, random_density(sub, d)


def suite_tpm_exactness(opts, rng):
    for seed in _seeds(rng, opts.trials):
        U, H0, Ht, rho = _random_process(seed, opts.max_dim_S)
        e0, et = spectral_decompose(H0).eigenvalues, spectral_decompose(Ht).eigenvalues
        worst = 0.0
        for b in tpm_distribution(U, H0, Ht, rho):
            if b.defined:
                worst = max(worst, abs(b.delta_E - (et[b.n] - e0[b.m])))
        yield worst


def suite_quasiprob_identity(opts, rng):
    for seed in _seeds(rng, opts.trials):
        U, H0, Ht, rho = _random_process(seed, opts.max_dim_S)
        q = quasiprob_distribution(U, H0, Ht, rho)
        lhs = (q.quasi * (q.eps_tau[None, :] - q.eps0[:, None])).sum(axis=0)
        rhs = np.where(q.p_n > 0, q.p_n * np.nan_to_num(q.delta_E_n), 0.0)
        mask = np.isfinite(q.delta_E_n)
        worst = float(np.max(np.abs(lhs - rhs)[mask], initial=0.0))
        worst = max(worst, abs(q.quasi.sum() - 1.0))
        avg = float(np.real(np.trace(Ht @ U @ rho @ U.conj().T) - np.trace(H0 @ rho)))
        yield max(worst, abs(float(np.nansum(q.p_n * q.delta_E_n)) - avg))


def suite_quasiprob_negativity(opts, rng):
    for seed in _seeds(rng, NEGATIVITY_TRIALS):
        sub = rng_for(seed)
        U, H0, Ht = haar_unitary(sub, 2), random_hermitian(sub, 2), random_hermitian(sub, 2)
        yield -quasiprob_distribution(U, H0, Ht, random_pure(sub, 2)).min_quasi


def _random_chain(seed: int, opts: VerifyOptions, steps: int = 3):
    sub = rng_for(seed)
    dS = int(sub.integers(2, opts.max_dim_S + 1))
    models = []
    for _ in range(steps):
        dA = int(sub.integers(2, opts.max_dim_A + 1))
        models.append(random_model(int(sub.integers(2**31)), dS, dA, int(sub.integers(2, dA + 1))))
    hams = [random_hermitian(sub, dS) for _ in range(steps + 1)]
    return models, hams, random_density(sub, dS)


def _likely_outcomes(models, rho):
    state, outs = rho, []
    for m in models:
        probs = [np.real(np.trace(m.apply(x, state))) for x in m.outcomes]
        k = int(np.argmax(probs))
        outs.append(m.outcomes[k])
        state = m.apply(outs[-1], state) / probs[k]
    return outs


def suite_sequential_additivity(opts, rng):
    for seed in _seeds(rng, opts.trials):
        models, hams, rho = _random_chain(seed, opts)
        outs = _likely_outcomes(models, rho)
        chain = sequential_energy_chain(models, rho, outs, hams)
        total = sequence_energy_change(models, rho, outs, hams[0], hams[-1])
        yield abs(sum(c.delta for c in chain) - total)


def suite_trajectory_start(opts, rng):
    # first step projects onto an eigenbasis of the initial state
    for seed in _seeds(rng, opts.trials):
        models, hams, _ = _random_chain(seed, opts, steps=2)
        sub = rng_for(seed, 1)
        d = models[0].dim_S
        V = haar_unitary(sub, d)
        rho = (V * sub.dirichlet(np.ones(d))) @ V.conj().T
        first = KrausInstrument(tuple(str(k) for k in range(d)), tuple([projector(V[:, k])] for k in range(d)))
        chain_models = [first] + models
        outs = _likely_outcomes(chain_models, rho)
        chain = sequential_energy_chain(chain_models, rho, outs, [hams[0]] + hams)
        psi = V[:, int(outs[0])]
        yield abs(chain[0].energy - float(np.real(psi.conj() @ hams[0] @ psi)))


# -- work ----------------------------------------------------------------------


def suite_vanishing_work(opts, rng):
    for seed in _seeds(rng, opts.trials):
        model = _random_commuting_model(seed, opts, energy_conserving=True)
        rho = random_density(rng_for(seed, 1), model.dim_S)
        yield max(abs(r.work) for r in work_reports(model, rho))


def suite_work_consistency(opts, rng):
    for seed in _seeds(rng, opts.trials):
        model = _random_commuting_model(seed, opts)
        rho = random_density(rng_for(seed, 1), model.dim_S)
        reps = work_reports(model, rho)
        yield abs(sum(r.prob * r.work for r in reps) - average_work(model, rho))


def suite_work_additivity(opts, rng):
    for seed in _seeds(rng, opts.trials):
        model = _random_commuting_model(seed, opts)
        rho = random_density(rng_for(seed, 1), model.dim_S)
        energies = {r.outcome: r.delta_E for r in energy_reports(model, rho)}
        worst = 0.0
        for r in work_reports(model, rho):
            app = apparatus_energy_change(model, rho, r.outcome)
            worst = max(worst, abs(r.work - energies[r.outcome] - app))
        yield worst


def suite_extension_invariance(opts, rng):
    for seed in _seeds(rng, opts.trials):
        model = _random_commuting_model(seed, opts)
        rho = random_density(rng_for(seed, 1), model.dim_S)
        ext = extend_model_commuting(model)
        worst = 0.0
        for x in model.outcomes:
            try:
                worst = max(worst, abs(total_energy_change(model, rho, x) - total_energy_change(ext, rho, x)))
            except ZeroProbability:
                continue
        yield worst


# -- thermodynamics --------------------------------------------------------------


def _thermo_samples(opts, rng) -> Iterator:
    for seed in _seeds(rng, opts.trials):
        model = _random_commuting_model(seed, opts)
        yield thermo_report(model, random_density(rng_for(seed, 1), model.dim_S), 1.0)


def suite_second_law_noninclusive(opts, rng):
    return (max(-t.W_irr, 0.0) for t in _shared("thermo", opts))


def suite_second_law_inclusive(opts, rng):
    return (max(-t.W_inc_irr, 0.0) for t in _shared("thermo", opts))


def suite_irr_ordering(opts, rng):
    return (max(t.W_inc_irr - t.W_irr, 0.0) for t in _shared("thermo", opts))


def suite_free_energy_decomposition(opts, rng):
    return (max(t.decomposition_residual_1, t.decomposition_residual_2) for t in _shared("thermo", opts))


def random_repeatable_spec(rng: np.random.Generator, pvm: Povm, rank: int, uniform: bool = False) -> RepeatableSpec:
    """Random intra-block unitaries; ``uniform`` makes ``V_{x,i}`` independent of ``i``."""
    table = {}
    for x, M in zip(pvm.outcomes, pvm.effects):
        w, v = np.linalg.eigh(M.data)
        B = v[:, w > 0.5]
        comp = np.eye(pvm.dim) - M.data

        def block():
            return B @ haar_unitary(rng, B.shape[1]) @ B.conj().T + comp

        if uniform:
            V = block()
            table[x] = [V] * rank
        else:
            table[x] = [block() for _ in range(rank)]
    return RepeatableSpec(tuple(rng.dirichlet(np.ones(rank))), table)


def _projective_triples(opts, rng, uniform=False):
    for seed in _seeds(rng, opts.trials):
        sub = rng_for(seed)
        d = int(sub.integers(2, opts.max_dim_S + 1))
        pvm = random_pvm(sub, d, int(sub.integers(2, d + 1)))
        spec = random_repeatable_spec(sub, pvm, int(sub.integers(1, 3)), uniform)
        yield projective_comparison(pvm, spec, random_density(sub, d), random_density(sub, d), 1.0)


def suite_projective_orderings(opts, rng):
    for c in _shared("projective", opts):
        yield max(
            c.W_irr_ideal - c.W_irr_rep,
            c.W_irr_noisy - c.W_irr_ideal,
            abs(c.W_inc_rep - c.W_inc_ideal),
            abs(c.W_inc_ideal - c.W_inc_noisy),
            abs(c.W_irr_ideal - c.W_irr_noisy - c.shannon_H),
            abs(c.W_irr_rep - c.W_irr_ideal - c.uhlmann_gap),
            c.closed_form_residual,
            0.0,
        )


def suite_repeatable_entropy(opts, rng):
    return (c.max_entropy_shift for c in _shared("projective", opts))


def suite_uhlmann_equality(opts, rng):
    for c in _shared("projective_uniform", opts):
        yield max(abs(c.uhlmann_gap), abs(c.W_irr_rep - c.W_irr_ideal))


def suite_uhlmann_gap(opts, rng):
    return (c.uhlmann_gap for c in _shared("projective", opts))


# sample sets reused by several suites; each draws from its own substream
_SAMPLERS: dict[str, Callable] = {
    "requirements": lambda opts, rng: _requirements(opts, rng, False),
    "requirements_family": lambda opts, rng: _requirements(opts, rng, True),
    "thermo": _thermo_samples,
    "projective": _projective_triples,
    "projective_uniform": lambda opts, rng: _projective_triples(opts, rng, uniform=True),
}


@lru_cache(maxsize=32)
def _shared(group: str, opts: VerifyOptions) -> tuple:
    rng = rng_for(opts.seed, 1000, list(_SAMPLERS).index(group))
    return tuple(_SAMPLERS[group](opts, rng))


# name -> (generator, kind, tolerance)
SUITES: dict[str, tuple[Callable, str, float]] = {
    "requirement1": (suite_requirement1, "bound", 1e-10),
    "requirement2": (suite_requirement2, "bound", 1e-10),
    "requirement1_family": (suite_requirement1_family, "bound", 1e-10),
    "requirement2_family": (suite_requirement2_family, "bound", 1e-10),
    "requirement3": (suite_requirement3, "bound", 1e-9),
    "naive_violates_requirement1": (suite_naive_violates_requirement1, "search", 1e-3),
    "reference_violates_requirement2": (suite_reference_violates_requirement2, "search", 1e-3),
    "tpm_exactness": (suite_tpm_exactness, "bound", 1e-10),
    "quasiprob_identity": (suite_quasiprob_identity, "bound", 1e-10),
    "quasiprob_negativity": (suite_quasiprob_negativity, "search", 1e-12),
    "sequential_additivity": (suite_sequential_additivity, "bound", 1e-10),
    "trajectory_start": (suite_trajectory_start, "bound", 1e-10),
    "vanishing_work": (suite_vanishing_work, "bound", 1e-9),
    "work_consistency": (suite_work_consistency, "bound", 1e-10),
    "work_additivity": (suite_work_additivity, "bound", 1e-9),
    "extension_invariance": (suite_extension_invariance, "bound", 1e-9),
    "second_law_noninclusive": (suite_second_law_noninclusive, "bound", 1e-9),
    "second_law_inclusive": (suite_second_law_inclusive, "bound", 1e-9),
    "irr_ordering": (suite_irr_ordering, "bound", 1e-9),
    "free_energy_decomposition": (suite_free_energy_decomposition, "bound", 1e-9),
    "projective_orderings": (suite_projective_orderings, "bound", 1e-9),
    "repeatable_entropy": (suite_repeatable_entropy, "bound", 1e-9),
    "uhlmann_equality": (suite_uhlmann_equality, "bound", 1e-9),
    "uhlmann_gap": (suite_uhlmann_gap, "search", 1e-9),
}


def run_suite(name: str, opts: VerifyOptions = VerifyOptions(), tolerance: float | None = None) -> SuiteResult:
    fn, kind, tol = SUITES[name]
    tol = tol if tolerance is None else tolerance
    stream = sorted(SUITES).index(name)
    values = [float(v) for v in fn(opts, rng_for(opts.seed, stream))]
    worst = max(values) if values else 0.0
    passed = worst <= tol if kind == "bound" else worst > tol
    return SuiteResult(name, kind, len(values), worst, tol, bool(passed))


def run_all(opts: VerifyOptions = VerifyOptions(), overrides: dict[str, float] | None = None,
            names=None) -> list[SuiteResult]:
    """Run suites in a fixed order; ``overrides`` replaces tolerances (test hook)."""
    overrides = overrides or {}
    unknown = set(overrides) - set(SUITES)
    if unknown:
        raise KeyError(f"unknown suites: {sorted(unknown)}")
    return [run_suite(n, opts, overrides.get(n)) for n in (names or SUITES)]
