"""Memory-capacity laboratory: registries, recall experiments, persistence.

A Registry is an immutable record of printed memories over one shared mode
list: printing appends an entry and touches nothing else, which is the
non-destructive sequential recording the model promises. On top of it sit
the experiments: pairwise fidelity matrices, greedy capacity packing,
forgetting curves, association graphs, and a versioned JSON file format
with canonical key order so saved registries diff cleanly.

Fidelity here is the state overlap; it is the only distinguishability
metric the model defines, and artifacts record the metric name so others
could coexist. In the common same-time mode every entry has been evolved by
the same damping for the same duration, so per-mode parameter gaps reduce
to code differences and the matrix is computed directly from those: that
makes its time invariance exact in floating point, not approximate. The
generic time-dependent route lives in `dqmem.states.log_overlap` and is
cross-checked against this one in the tests; the staggered mode (entries
printed at different times) uses it.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.integrate import quad
from scipy.sparse.csgraph import connected_components

from .states import (
    Code,
    MemoryState,
    ModeParams,
    _checked_modes,
    log_cosh,
    forgetting_time,
    overlap,
    theta_from_beta,
    total_occupation,
    vacuum_overlap,
)

__all__ = [
    "Registry",
    "RegistryEntry",
    "FidelityMatrix",
    "AssociationGraph",
    "CapacityReport",
    "ForgettingCurve",
    "CodeSpec",
    "ExperimentConfig",
    "RegistryError",
    "RegistryVersionError",
    "RegistryFormatError",
    "RegistryCodeLengthError",
    "new_registry",
    "print_memory",
    "fidelity_matrix",
    "association_graph",
    "capacity_estimate",
    "greedy_pack",
    "forgetting_curve",
    "save_registry",
    "load_registry",
    "parse_experiment_config",
]

SCHEMA_VERSION = 1


class RegistryError(ValueError):
    """Base class for registry persistence failures."""


class RegistryVersionError(RegistryError):
    """Registry file carries a schema version this build does not read."""


class RegistryFormatError(RegistryError):
    """Registry file is not valid JSON or violates the schema."""


class RegistryCodeLengthError(RegistryError):
    """An entry's code length disagrees with the registry's mode count."""


@dataclass(frozen=True)
class RegistryEntry:
    entry_id: str
    code: Code
    printed_at: float = 0.0

    def __post_init__(self):
        if not isinstance(self.entry_id, str) or not self.entry_id:
            raise ValueError("entry id must be a non-empty string")
        object.__setattr__(self, "printed_at", float(self.printed_at))
        if not (self.printed_at >= 0.0 and math.isfinite(self.printed_at)):
            raise ValueError(
                f"printed_at must be finite and >= 0, got {self.printed_at}"
            )


@dataclass(frozen=True)
class Registry:
    """Immutable collection of printed memories over one shared mode list."""

    modes: tuple[ModeParams, ...]
    entries: tuple[RegistryEntry, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "modes", _checked_modes(self.modes))
        object.__setattr__(self, "entries", tuple(self.entries))
        k = len(self.modes)
        seen: set[str] = set()
        for e in self.entries:
            if len(e.code) != k:
                raise RegistryCodeLengthError(
                    f"entry '{e.entry_id}' has code length {len(e.code)}, "
                    f"registry has {k} modes"
                )
            if e.entry_id in seen:
                raise ValueError(f"duplicate entry id '{e.entry_id}'")
            seen.add(e.entry_id)

    @property
    def k(self) -> int:
        return len(self.modes)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.entry_id for e in self.entries)

    def entry(self, entry_id: str) -> RegistryEntry:
        for e in self.entries:
            if e.entry_id == entry_id:
                return e
        raise KeyError(f"no entry with id '{entry_id}'")

    def state(self, entry_id: str, time: float = 0.0) -> MemoryState:
        """Memory state of one entry at absolute age `time` since printing."""
        return MemoryState(self.modes, self.entry(entry_id).code, time)


def new_registry(modes: Iterable[ModeParams]) -> Registry:
    return Registry(tuple(modes), ())


def print_memory(registry: Registry, entry_id: str, code: Code | None = None, *,
                 beta: float | None = None, printed_at: float = 0.0) -> Registry:
    """Append one memory, given either its code or a thermal beta-spec.

    With `beta`, the code is the thermal one per mode: theta_kappa such that
    the occupation is Bose at (beta, omega_kappa). Returns a new registry;
    the input and every existing entry are untouched.
    """
    if (code is None) == (beta is None):
        raise ValueError("provide exactly one of code or beta")
    if beta is not None:
        code = Code(tuple(theta_from_beta(beta, m.omega) for m in registry.modes))
    assert code is not None
    if any(e.entry_id == entry_id for e in registry.entries):
        raise ValueError(f"duplicate entry id '{entry_id}'")
    entry = RegistryEntry(entry_id=entry_id, code=code, printed_at=printed_at)
    return Registry(registry.modes, registry.entries + (entry,),
                    registry.schema_version)


@dataclass(frozen=True, eq=False)
class FidelityMatrix:
    """Symmetric pairwise-overlap matrix of registry entries at one time.

    values is read-only; diagonal exactly 1, entries in (0, 1]. In same-time
    mode the values depend only on code gaps, so matrices taken at different
    evaluation times are equal array-for-array.
    """

    ids: tuple[str, ...]
    values: np.ndarray
    eval_time: float
    staggered: bool
    metric: str = "overlap"

    def __post_init__(self):
        self.values.setflags(write=False)


def _same_time_log_rows(codes: np.ndarray, i: int) -> np.ndarray:
    """-sum_k ln cosh(theta_j - theta_i) for all j > i; exact in code gaps."""
    gaps = codes[i + 1:] - codes[i]
    logs = log_cosh(gaps)
    return np.array([-math.fsum(row) for row in logs], dtype=float)


def fidelity_matrix(registry: Registry, t: float, *, staggered: bool = False,
                    threads: int = 1) -> FidelityMatrix:
    """Pairwise overlaps of all entries evolved to common evaluation time t.

    Same-time mode (default) treats every entry as printed at time 0 and
    evolved for t: the per-mode gap (gamma t - theta_a) - (gamma t - theta_b)
    collapses algebraically to theta_b - theta_a, and it is computed that
    way, making the result exactly t-independent. Staggered mode gives each
    entry its own elapsed time t - printed_at (requires t >= every
    printed_at) and uses the generic trajectory route.

    Rows are computed in parallel when threads > 1; assembly order is fixed,
    so results do not depend on the thread count.
    """
    t = float(t)
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"evaluation time must be finite and >= 0, got {t}")
    if not registry.entries:
        raise ValueError("registry has no entries")
    threads = max(1, int(threads))
    n = len(registry.entries)

    if staggered:
        latest = max(e.printed_at for e in registry.entries)
        if t < latest:
            raise ValueError(
                f"evaluation time {t} precedes an entry's printing time {latest}"
            )
        states = [
            MemoryState(registry.modes, e.code, t - e.printed_at)
            for e in registry.entries
        ]
        from .states import log_overlap as _lo

        def row(i: int) -> np.ndarray:
            return np.array([_lo(states[i], s) for s in states[i + 1:]], dtype=float)
    else:
        stamps = {e.printed_at for e in registry.entries}
        if len(stamps) > 1:
            raise ValueError(
                "entries have differing printing times; same-time fidelity "
                "would misread them — pass staggered=True"
            )
        codes = np.array([e.code.thetas for e in registry.entries], dtype=float)

        def row(i: int) -> np.ndarray:
            return _same_time_log_rows(codes, i)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n)))
    else:
        rows = [row(i) for i in range(n)]

    values = np.ones((n, n), dtype=float)
    for i, r in enumerate(rows):
        values[i, i + 1:] = np.exp(r)
        values[i + 1:, i] = values[i, i + 1:]
    return FidelityMatrix(ids=registry.ids, values=values, eval_time=t,
                          staggered=staggered)


@dataclass(frozen=True)
class AssociationGraph:
    """Thresholded fidelity graph: edges and connected association clusters."""

    ids: tuple[str, ...]
    threshold: float
    eval_time: float
    edges: tuple[tuple[str, str, float], ...]
    clusters: tuple[tuple[str, ...], ...]


def association_graph(registry: Registry, t: float, threshold: float, *,
                      staggered: bool = False, threads: int = 1) -> AssociationGraph:
    """Edges (i, j) wherever fidelity >= threshold, plus connected clusters.

    Clusters are ordered by first member; members keep registry order, so
    the output is deterministic.
    """
    threshold = float(threshold)
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    fm = fidelity_matrix(registry, t, staggered=staggered, threads=threads)
    n = len(fm.ids)
    adj = np.zeros((n, n), dtype=bool)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if fm.values[i, j] >= threshold:
                edges.append((fm.ids[i], fm.ids[j], float(fm.values[i, j])))
                adj[i, j] = adj[j, i] = True
    n_comp, labels = connected_components(sparse.csr_matrix(adj), directed=False)
    clusters = tuple(
        tuple(fm.ids[i] for i in range(n) if labels[i] == c) for c in range(n_comp)
    )
    return AssociationGraph(ids=fm.ids, threshold=threshold, eval_time=float(t),
                            edges=tuple(edges), clusters=clusters)


@dataclass(frozen=True)
class CapacityReport:
    """Outcome of one greedy packing sweep, reproducible from its fields."""

    modes: tuple[ModeParams, ...]
    theta_range: tuple[float, float]
    epsilon: float
    candidate_count: int
    seed: int
    accepted_count: int
    accepted_indices: tuple[int, ...]
    accepted_codes: tuple[Code, ...]
    acceptance_curve: tuple[int, ...]
    expected_pair_log_overlap: float
    expected_pair_overlap: float


def greedy_pack(thetas: Sequence[Sequence[float]], epsilon: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Greedy mutual-distinguishability packing over candidate codes.

    Accepts a candidate iff its overlap with every already accepted code is
    strictly below epsilon; overlaps are compared in the log domain with
    compensated per-mode sums. Returns (accepted indices, acceptance curve),
    the curve being the accepted count after each candidate.
    """
    epsilon = float(epsilon)
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    log_eps = math.log(epsilon)
    cands = [np.asarray(c, dtype=float) for c in thetas]
    accepted: list[int] = []
    curve: list[int] = []
    for idx, cand in enumerate(cands):
        ok = True
        for j in accepted:
            if -math.fsum(log_cosh(cand - cands[j])) >= log_eps:
                ok = False
                break
        if ok:
            accepted.append(idx)
        curve.append(len(accepted))
    return tuple(accepted), tuple(curve)


def _expected_log_cosh_gap(width: float) -> float:
    """E[ln cosh(D)] for D = |U1 - U2|, U uniform on an interval of `width`."""
    if width == 0.0:
        return 0.0
    density = lambda u: 2.0 * (width - u) / (width * width)
    val, _err = quad(lambda u: density(u) * float(log_cosh(u)), 0.0, width,
                     epsabs=1e-14, epsrel=1e-12, limit=200)
    return val


def capacity_estimate(modes: Iterable[ModeParams], theta_range: tuple[float, float],
                      epsilon: float, candidate_count: int, seed: int) -> CapacityReport:
    """Greedy capacity estimate: how many mutually distinguishable codes fit.

    Candidates are sampled uniformly in theta_range per mode with numpy's
    default_rng(seed) and packed greedily; the whole report is a pure
    function of (modes, range, epsilon, count, seed). The theoretical
    summary is the expected pairwise overlap between two random candidates,
    exp(-K * E[ln cosh gap]), computed by quadrature, not sampling.
    """
    ms = _checked_modes(modes)
    lo, hi = (float(theta_range[0]), float(theta_range[1]))
    if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 <= lo < hi):
        raise ValueError(f"empty or invalid theta range [{lo}, {hi})")
    candidate_count = int(candidate_count)
    if candidate_count < 1:
        raise ValueError(f"candidate_count must be >= 1, got {candidate_count}")
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")

    rng = np.random.default_rng(seed)
    samples = rng.uniform(lo, hi, size=(candidate_count, len(ms)))
    accepted_idx, curve = greedy_pack(samples, epsilon)

    mean_log = -len(ms) * _expected_log_cosh_gap(hi - lo)
    return CapacityReport(
        modes=ms,
        theta_range=(lo, hi),
        epsilon=float(epsilon),
        candidate_count=candidate_count,
        seed=seed,
        accepted_count=len(accepted_idx),
        accepted_indices=accepted_idx,
        accepted_codes=tuple(Code(tuple(samples[i])) for i in accepted_idx),
        acceptance_curve=curve,
        expected_pair_log_overlap=mean_log,
        expected_pair_overlap=math.exp(mean_log),
    )


@dataclass(frozen=True)
class ForgettingCurve:
    """Recall observables along the trajectory of one code."""

    times: tuple[float, ...]
    self_overlap: tuple[float, ...]
    vacuum_overlap: tuple[float, ...]
    total_occupation: tuple[float, ...]
    tau: float


def forgetting_curve(code: Code, modes: Iterable[ModeParams], times) -> ForgettingCurve:
    """Self-overlap, vacuum overlap and occupation of a code over time.

    The vacuum overlap peaks at exactly 1 at the forgetting time for a
    single-mode code; the self-overlap log-slope approaches -sum(gamma) at
    large times. tau is forgetting_time of the written state (math.inf if
    nothing is damped).
    """
    ms = _checked_modes(modes)
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size < 1:
        raise ValueError("time grid needs at least one point")
    if not np.all(np.isfinite(ts)) or np.any(ts < 0.0):
        raise ValueError("time grid must be finite and non-negative")
    if np.any(np.diff(ts) <= 0.0):
        raise ValueError("time grid must be strictly increasing")
    written = MemoryState(ms, code, 0.0)
    self_o, vac_o, occ = [], [], []
    for t in ts:
        s = MemoryState(ms, code, float(t))
        self_o.append(overlap(s, written))
        vac_o.append(vacuum_overlap(s))
        occ.append(total_occupation(s))
    return ForgettingCurve(
        times=tuple(float(t) for t in ts),
        self_overlap=tuple(self_o),
        vacuum_overlap=tuple(vac_o),
        total_occupation=tuple(occ),
        tau=forgetting_time(written),
    )


# ---------------------------------------------------------------------------
# persistence


def _registry_document(registry: Registry) -> dict:
    return {
        "schema_version": registry.schema_version,
        "modes": [
            {"index": m.index, "omega": m.omega, "gamma": m.gamma}
            for m in registry.modes
        ],
        "entries": [
            {
                "id": e.entry_id,
                "printed_at": e.printed_at,
                "thetas": list(e.code.thetas),
            }
            for e in registry.entries
        ],
    }


def registry_to_json(registry: Registry) -> str:
    """Canonical serialization: sorted keys, two-space indent, one trailing LF."""
    return json.dumps(_registry_document(registry), sort_keys=True, indent=2) + "\n"


def save_registry(registry: Registry, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(registry_to_json(registry))


def _exact_keys(obj: Mapping, keys: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise RegistryFormatError(f"{where} must be an object")
    got = set(obj.keys())
    if got != keys:
        missing = sorted(keys - got)
        unknown = sorted(got - keys)
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if unknown:
            parts.append(f"unknown keys {unknown}")
        raise RegistryFormatError(f"{where}: " + "; ".join(parts))


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise RegistryFormatError(f"{where} must be a number, got {type(x).__name__}")
    return float(x)


def load_registry(path) -> Registry:
    """Read a registry file, distinguishing the three failure classes.

    Version mismatch -> RegistryVersionError; malformed JSON, wrong shapes
    or bad values -> RegistryFormatError; code/mode length disagreement ->
    RegistryCodeLengthError.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise RegistryFormatError(f"malformed registry file {path}: {exc}") from exc

    _exact_keys(doc, {"schema_version", "modes", "entries"}, "registry document")
    version = doc["schema_version"]
    if isinstance(version, bool) or not isinstance(version, int):
        raise RegistryFormatError("schema_version must be an integer")
    if version != SCHEMA_VERSION:
        raise RegistryVersionError(
            f"unsupported registry schema_version {version}; this build reads "
            f"version {SCHEMA_VERSION} only — re-export the registry or upgrade"
        )
    if not isinstance(doc["modes"], list) or not isinstance(doc["entries"], list):
        raise RegistryFormatError("modes and entries must be arrays")

    try:
        modes = []
        for i, m in enumerate(doc["modes"]):
            _exact_keys(m, {"index", "omega", "gamma"}, f"modes[{i}]")
            modes.append(ModeParams(
                index=int(_number(m["index"], f"modes[{i}].index")),
                omega=_number(m["omega"], f"modes[{i}].omega"),
                gamma=_number(m["gamma"], f"modes[{i}].gamma"),
            ))
        entries = []
        for i, e in enumerate(doc["entries"]):
            _exact_keys(e, {"id", "printed_at", "thetas"}, f"entries[{i}]")
            if not isinstance(e["id"], str):
                raise RegistryFormatError(f"entries[{i}].id must be a string")
            if not isinstance(e["thetas"], list):
                raise RegistryFormatError(f"entries[{i}].thetas must be an array")
            if len(e["thetas"]) != len(modes):
                raise RegistryCodeLengthError(
                    f"entries[{i}] ('{e['id']}') has {len(e['thetas'])} thetas, "
                    f"registry has {len(modes)} modes"
                )
            thetas = tuple(
                _number(x, f"entries[{i}].thetas[{j}]")
                for j, x in enumerate(e["thetas"])
            )
            entries.append(RegistryEntry(
                entry_id=e["id"],
                code=Code(thetas),
                printed_at=_number(e["printed_at"], f"entries[{i}].printed_at"),
            ))
        return Registry(tuple(modes), tuple(entries), version)
    except RegistryError:
        raise
    except ValueError as exc:
        raise RegistryFormatError(f"invalid registry contents: {exc}") from exc


# ---------------------------------------------------------------------------
# experiment configs


@dataclass(frozen=True)
class CodeSpec:
    """How an experiment obtains its code: explicit, thermal, or sampled."""

    thetas: tuple[float, ...] | None = None
    beta: float | None = None
    sample: tuple[float, float, int] | None = None  # (lo, hi, seed)

    def realize(self, modes: tuple[ModeParams, ...]) -> Code:
        if self.thetas is not None:
            return Code(self.thetas)
        if self.beta is not None:
            return Code(tuple(theta_from_beta(self.beta, m.omega) for m in modes))
        assert self.sample is not None
        lo, hi, seed = self.sample
        rng = np.random.default_rng(seed)
        return Code(tuple(rng.uniform(lo, hi, size=len(modes))))


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed, validated experiment description; `raw` echoes the source."""

    kind: str
    raw: dict
    modes: tuple[ModeParams, ...] | None = None
    code: CodeSpec | None = None
    registry: str | None = None
    time: float | None = None
    times: tuple[float, ...] | None = None
    threshold: float | None = None
    staggered: bool = False
    theta_range: tuple[float, float] | None = None
    epsilon: float | None = None
    candidates: int | None = None
    seed: int | None = None
    out: str | None = None


_KINDS = (
    "fidelity-matrix",
    "capacity-sweep",
    "forgetting-curve",
    "association-graph",
    "thermo-trace",
)


def _cfg_error(msg: str) -> ValueError:
    return ValueError(f"invalid experiment config: {msg}")


def _check_keys(mapping: Mapping, allowed: set[str], required: set[str], where: str) -> None:
    got = set(mapping.keys())
    unknown = sorted(got - allowed)
    if unknown:
        raise _cfg_error(f"{where}: unknown keys {unknown}")
    missing = sorted(required - got)
    if missing:
        raise _cfg_error(f"{where}: missing keys {missing}")


def _cfg_number(mapping: Mapping, key: str, where: str) -> float:
    x = mapping[key]
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise _cfg_error(f"{where}.{key} must be a number")
    return float(x)


def _cfg_int(mapping: Mapping, key: str, where: str) -> int:
    x = mapping[key]
    if isinstance(x, bool) or not isinstance(x, int):
        raise _cfg_error(f"{where}.{key} must be an integer")
    return x


def _parse_modes(obj, where: str) -> tuple[ModeParams, ...]:
    if not isinstance(obj, Mapping):
        raise _cfg_error(f"{where} must be an object with omega and gamma arrays")
    _check_keys(obj, {"omega", "gamma"}, {"omega", "gamma"}, where)
    omega, gamma = obj["omega"], obj["gamma"]
    if not (isinstance(omega, list) and isinstance(gamma, list)):
        raise _cfg_error(f"{where}.omega and {where}.gamma must be arrays")
    if len(omega) != len(gamma) or not omega:
        raise _cfg_error(f"{where}: omega and gamma must be equally sized and non-empty")
    try:
        return tuple(
            ModeParams(index=i, omega=float(o), gamma=float(g))
            for i, (o, g) in enumerate(zip(omega, gamma))
        )
    except (TypeError, ValueError) as exc:
        raise _cfg_error(f"{where}: {exc}") from exc


def _parse_code(obj, where: str) -> CodeSpec:
    if not isinstance(obj, Mapping):
        raise _cfg_error(f"{where} must be an object")
    keys = set(obj.keys())
    if keys == {"thetas"}:
        if not isinstance(obj["thetas"], list):
            raise _cfg_error(f"{where}.thetas must be an array")
        return CodeSpec(thetas=tuple(
            _cfg_number({"v": x}, "v", f"{where}.thetas") for x in obj["thetas"]
        ))
    if keys == {"beta"}:
        beta = _cfg_number(obj, "beta", where)
        if beta <= 0.0:
            raise _cfg_error(f"{where}.beta must be positive")
        return CodeSpec(beta=beta)
    if keys == {"sample"}:
        sub = obj["sample"]
        if not isinstance(sub, Mapping):
            raise _cfg_error(f"{where}.sample must be an object")
        _check_keys(sub, {"lo", "hi", "seed"}, {"lo", "hi", "seed"}, f"{where}.sample")
        lo = _cfg_number(sub, "lo", f"{where}.sample")
        hi = _cfg_number(sub, "hi", f"{where}.sample")
        seed = _cfg_int(sub, "seed", f"{where}.sample")
        if not 0.0 <= lo < hi:
            raise _cfg_error(f"{where}.sample needs 0 <= lo < hi")
        if seed < 0:
            raise _cfg_error(f"{where}.sample.seed must be >= 0")
        return CodeSpec(sample=(lo, hi, seed))
    raise _cfg_error(
        f"{where} must contain exactly one of: thetas, beta, sample "
        f"(got {sorted(keys)})"
    )


def _parse_times(obj, where: str) -> tuple[float, ...]:
    if not isinstance(obj, Mapping):
        raise _cfg_error(f"{where} must be an object with start, stop, num")
    _check_keys(obj, {"start", "stop", "num"}, {"start", "stop", "num"}, where)
    start = _cfg_number(obj, "start", where)
    stop = _cfg_number(obj, "stop", where)
    num = _cfg_int(obj, "num", where)
    if not (0.0 <= start < stop and math.isfinite(stop)):
        raise _cfg_error(f"{where}: need 0 <= start < stop")
    if num < 2:
        raise _cfg_error(f"{where}.num must be >= 2")
    return tuple(float(x) for x in np.linspace(start, stop, num))


def parse_experiment_config(doc: Mapping) -> ExperimentConfig:
    """Validate a parsed config document; unknown keys anywhere are errors."""
    if not isinstance(doc, Mapping):
        raise _cfg_error("top level must be an object")
    if "kind" not in doc:
        raise _cfg_error("missing key 'kind'")
    kind = doc["kind"]
    if kind not in _KINDS:
        raise _cfg_error(f"unknown kind '{kind}'; expected one of {list(_KINDS)}")

    common_opt = {"kind", "out"}
    raw = {k: doc[k] for k in doc}

    def finish(**fields) -> ExperimentConfig:
        out = doc.get("out")
        if out is not None and not isinstance(out, str):
            raise _cfg_error("out must be a string path")
        return ExperimentConfig(kind=kind, raw=raw, out=out, **fields)

    if kind in ("fidelity-matrix", "association-graph"):
        allowed = common_opt | {"registry", "time", "staggered", "threshold"}
        required = {"registry", "time"}
        if kind == "association-graph":
            required = required | {"threshold"}
        _check_keys(doc, allowed, required, kind)
        if not isinstance(doc["registry"], str):
            raise _cfg_error("registry must be a string path")
        time = _cfg_number(doc, "time", kind)
        if time < 0.0 or not math.isfinite(time):
            raise _cfg_error("time must be finite and >= 0")
        staggered = doc.get("staggered", False)
        if not isinstance(staggered, bool):
            raise _cfg_error("staggered must be a boolean")
        threshold = None
        if "threshold" in doc:
            threshold = _cfg_number(doc, "threshold", kind)
            if not (0.0 < threshold < 1.0):
                raise _cfg_error("threshold must be in (0, 1)")
        return finish(registry=doc["registry"], time=time, staggered=staggered,
                      threshold=threshold)

    if kind == "capacity-sweep":
        allowed = common_opt | {"modes", "theta_range", "epsilon", "candidates", "seed"}
        _check_keys(doc, allowed, allowed - common_opt, kind)
        modes = _parse_modes(doc["modes"], "modes")
        tr = doc["theta_range"]
        if not (isinstance(tr, list) and len(tr) == 2):
            raise _cfg_error("theta_range must be a two-element array")
        lo = _cfg_number({"v": tr[0]}, "v", "theta_range[0]")
        hi = _cfg_number({"v": tr[1]}, "v", "theta_range[1]")
        if not 0.0 <= lo < hi:
            raise _cfg_error("theta_range needs 0 <= lo < hi")
        epsilon = _cfg_number(doc, "epsilon", kind)
        if not (0.0 < epsilon < 1.0):
            raise _cfg_error("epsilon must be in (0, 1)")
        candidates = _cfg_int(doc, "candidates", kind)
        if candidates < 1:
            raise _cfg_error("candidates must be >= 1")
        seed = _cfg_int(doc, "seed", kind)
        if seed < 0:
            raise _cfg_error("seed must be >= 0")
        return finish(modes=modes, theta_range=(lo, hi), epsilon=epsilon,
                      candidates=candidates, seed=seed)

    # forgetting-curve and thermo-trace share shape: modes + code + times
    allowed = common_opt | {"modes", "code", "times"}
    _check_keys(doc, allowed, {"modes", "code", "times"}, kind)
    return finish(
        modes=_parse_modes(doc["modes"], "modes"),
        code=_parse_code(doc["code"], "code"),
        times=_parse_times(doc["times"], "times"),
    )
