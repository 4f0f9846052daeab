"""Parameter sweeps, an independent oracle, and proof certificates."""

from __future__ import annotations

import json
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import jsonschema

from .chase import (
    STEP_TYPES,
    CheckReport,
    ProofScript,
    RuleStep,
    SwapSym,
    WeightedConfig,
    check_script,
    eval_config,
)
from .exact import Weight, WeightParseError, format_weight, parse_weight
from .lang import (
    CompiledIdentity,
    IdentityAst,
    ParseError,
    Verdict,
    compile_expr,
    format_expr,
    free_vars,
    parse_expr,
    parse_identity,
)
from .scripts import CATALOG_TEXT, builtin_identity

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class SweepSpecError(ValueError):
    pass


class CertificateError(ValueError):
    pass


# -- sweeps --------------------------------------------------------------------------------

_RANGE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*$")


@dataclass(frozen=True)
class ParamRange:
    name: str
    lo: object  # Expr
    hi: object

    def __str__(self) -> str:
        return f"{self.name}={format_expr(self.lo)}..{format_expr(self.hi)}"


def parse_range(text: str) -> ParamRange:
    """Parse ``"m=0..n"``; bounds are identity-language expressions."""
    match = _RANGE_RE.match(text)
    if not match:
        raise SweepSpecError(f"malformed range {text!r}; expected NAME=LO..HI")
    name, lo, hi = match.groups()
    try:
        return ParamRange(name, parse_expr(lo), parse_expr(hi))
    except ParseError as exc:
        raise SweepSpecError(f"bad bound in range {text!r}: {exc.message}") from None


@dataclass(frozen=True)
class SweepSpec:
    identity: IdentityAst
    ranges: tuple[ParamRange, ...]
    identity_id: str | None = None
    max_instances: int | None = None
    time_budget: float | None = None
    workers: int = 1
    fib: str = "signed"

    @classmethod
    def build(cls, identity: str | IdentityAst, ranges: Iterable[str | ParamRange],
              **options) -> SweepSpec:
        """``identity`` is a catalog id, identity text, or a parsed identity."""
        identity_id = None
        if isinstance(identity, str):
            if identity in CATALOG_TEXT:
                identity_id = identity
                identity = builtin_identity(identity)
            else:
                identity = parse_identity(identity)
        parsed = tuple(r if isinstance(r, ParamRange) else parse_range(r) for r in ranges)
        spec = cls(identity, parsed, identity_id, **options)
        spec.validate()
        return spec

    def validate(self) -> None:
        params = self.identity.params
        seen: list[str] = []
        for r in self.ranges:
            if r.name in seen:
                raise SweepSpecError(f"parameter {r.name} has more than one range")
            if r.name not in params:
                raise SweepSpecError(f"{r.name} is not a parameter of the identity")
            for bound in (r.lo, r.hi):
                unknown = free_vars(bound) - set(seen)
                if unknown:
                    raise SweepSpecError(
                        f"range for {r.name} refers to {', '.join(sorted(unknown))}, "
                        "which must be declared by an earlier range")
            seen.append(r.name)
        missing = [p for p in params if p not in seen]
        if missing:
            raise SweepSpecError(f"no range given for {', '.join(missing)}")
        if self.workers < 1:
            raise SweepSpecError("workers must be at least 1")

    def bindings(self) -> Iterable[dict[str, int]]:
        """All binding tuples in declaration order (later ranges vary fastest)."""
        bounds = [(r.name, compile_expr(r.lo), compile_expr(r.hi), r) for r in self.ranges]

        def walk(i: int, env: dict):
            if i == len(bounds):
                yield dict(env)
                return
            name, lo_f, hi_f, r = bounds[i]
            lo, hi = _int_bound(lo_f(env), r), _int_bound(hi_f(env), r)
            for v in range(lo, hi + 1):
                env[name] = v
                yield from walk(i + 1, env)
            env.pop(name, None)

        return walk(0, {})

    def label(self) -> str:
        return self.identity_id or "identity"


def _int_bound(value, r: ParamRange) -> int:
    if isinstance(value, int):
        return value
    raise SweepSpecError(f"range {r} has a non-integer bound")


@dataclass(frozen=True)
class SweepFailure:
    bindings: dict
    lhs: str
    rhs: str


@dataclass
class SweepReport:
    identity: str
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list[SweepFailure] = field(default_factory=list)
    wall_time: float = 0.0
    complete: bool = True

    def summary(self) -> str:
        text = f"{self.passed} passed, {self.failed} failed, {self.skipped} skipped"
        if not self.complete:
            text += " (incomplete)"
        return text

    def to_dict(self, include_time: bool = True) -> dict:
        out = {
            "identity": self.identity,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "complete": self.complete,
            "failures": [
                {"bindings": f.bindings, "lhs": f.lhs, "rhs": f.rhs} for f in self.failures
            ],
        }
        if include_time:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def _run_chunk(args) -> list[tuple[str, str | None, str | None]]:
    ast, fib, chunk = args
    compiled = CompiledIdentity(ast, fib)
    out = []
    for bindings in chunk:
        res = compiled.run(bindings)
        if res.verdict is Verdict.FAILED:
            out.append((res.verdict.value, format_weight(res.lhs), format_weight(res.rhs)))
        else:
            out.append((res.verdict.value, None, None))
    return out


def sweep(spec: SweepSpec) -> SweepReport:
    """Check every binding tuple of ``spec`` exactly; results keep enumeration order."""
    from .lang import format_identity

    start = time.perf_counter()
    report = SweepReport(spec.identity_id or format_identity(spec.identity))
    deadline = None if spec.time_budget is None else start + spec.time_budget

    instances: list[dict] = []
    for bindings in spec.bindings():
        if spec.max_instances is not None and len(instances) >= spec.max_instances:
            report.complete = False
            break
        instances.append(bindings)

    def record(bindings, outcome):
        verdict, lhs, rhs = outcome
        report.total += 1
        if verdict == Verdict.PASSED.value:
            report.passed += 1
        elif verdict == Verdict.SKIPPED.value:
            report.skipped += 1
        else:
            report.failed += 1
            report.failures.append(SweepFailure(bindings, lhs, rhs))

    if spec.workers > 1 and len(instances) > 1:
        size = max(1, len(instances) // (spec.workers * 4))
        chunks = [instances[i:i + size] for i in range(0, len(instances), size)]
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = pool.map(_run_chunk, [(spec.identity, spec.fib, c) for c in chunks])
            for chunk, outcomes in zip(chunks, results):
                for bindings, outcome in zip(chunk, outcomes):
                    record(bindings, outcome)
                if deadline is not None and time.perf_counter() > deadline:
                    report.complete = False
                    break
    else:
        compiled = CompiledIdentity(spec.identity, spec.fib)
        for bindings in instances:
            if deadline is not None and time.perf_counter() > deadline:
                report.complete = False
                break
            res = compiled.run(bindings)
            if res.verdict is Verdict.FAILED:
                record(bindings, ("failed", format_weight(res.lhs), format_weight(res.rhs)))
            else:
                record(bindings, (res.verdict.value, None, None))

    report.wall_time = time.perf_counter() - start
    return report


def load_sweep_toml(text: str) -> SweepSpec:
    """Read a sweep spec from TOML with keys ``id`` or ``identity``, ``ranges``, options."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SweepSpecError(f"invalid TOML: {exc}") from None
    target = data.get("id", data.get("identity"))
    if not isinstance(target, str):
        raise SweepSpecError("sweep spec needs an 'id' or 'identity' string")
    ranges = data.get("ranges")
    if not isinstance(ranges, list) or not all(isinstance(r, str) for r in ranges):
        raise SweepSpecError("'ranges' must be a list of strings like \"m=0..n\"")
    options = {k: data[k] for k in ("max_instances", "time_budget", "workers", "fib")
               if k in data}
    unknown = set(data) - {"id", "identity", "ranges", *options}
    if unknown:
        raise SweepSpecError(f"unknown sweep spec keys: {', '.join(sorted(unknown))}")
    return SweepSpec.build(target, ranges, **options)


def fib_convention_tally(bound: int = 25) -> dict[str, tuple[int, int]]:
    """Pass/fail counts of the Fibonacci Quarterly identity per index convention."""
    from .scripts import builtin_ranges

    tally = {}
    for name in ("signed", "zero", "mirror"):
        spec = SweepSpec.build("fib_quarterly", builtin_ranges("fib_quarterly", bound), fib=name)
        rep = sweep(spec)
        tally[name] = (rep.passed, rep.failed)
    return tally


# -- independent oracle -----------------------------------------------------------------------
#
# Left-hand sides by naive summation, using factorials and an iterative
# Fibonacci. Nothing here touches the triangle memo or the identity language.


def _fact_binom(n: int, k: int) -> int:
    if n < 0:
        raise ValueError(f"negative upper index {n}")
    if k < 0 or k > n:
        return 0
    return math.factorial(n) // (math.factorial(k) * math.factorial(n - k))


def _iter_fib(i: int) -> int:
    a, b = 0, 1
    for _ in range(abs(i)):
        a, b = b, a + b
    if i < 0 and i % 2 == 0:
        return -a
    return a


def _binomial_expansion(n: int) -> Weight:
    a_plus_b = Weight.var("a") + Weight.var("b")
    out = Weight.const(1)
    for _ in range(n):
        out = out * a_plus_b
    return out


C = _fact_binom

_ORACLE: dict[str, Callable[..., object]] = {
    "row_sum": lambda n: sum(C(n, k) for k in range(n + 1)),
    "half_row_even": lambda n: sum(C(n, 2 * k) for k in range(n + 1)),
    "half_row_odd": lambda n: sum(C(n, 2 * k + 1) for k in range(n + 1)),
    "hockey_stick": lambda n, m: sum(C(k, m) for k in range(m, n + 1)),
    "weighted_row": lambda n: sum(k * C(n, k) for k in range(n + 1)),
    "weighted_half_even": lambda n: sum(k * C(n, 2 * k) for k in range(n + 1)),
    "weighted_half_odd": lambda n: sum(k * C(n, 2 * k + 1) for k in range(n + 1)),
    "lagrange": lambda n: sum(C(n, k) ** 2 for k in range(n + 1)),
    "lagrange_as_printed": lambda n: sum(C(n, k) ** 2 for k in range(1, n + 1)),
    "chu_vandermonde": lambda l, m, n: sum(C(n, k) * C(m, l - k) for k in range(l + 1)),
    "alternating": lambda n: sum((-1) ** k * C(n, k) for k in range(n + 1)),
    "alternating_k": lambda n: sum((-1) ** k * k * C(n, k) for k in range(n + 1)),
    "alt_binom": lambda n, m: sum((-1) ** k * C(n, k) * C(k, m) for k in range(m, n + 1)),
    "binomial_theorem": lambda n: _binomial_expansion(n),
    "hockey_variant": lambda n, m: sum(k * C(k, m) for k in range(m, n + 1)),
    "hockey_gen": lambda n, m, l: sum(C(k, l) * C(k, m) for k in range(n + 1)),
    "upside_down_cv": lambda n, m, l: sum(C(k, m) * C(n - k, l) for k in range(m, n - l + 1)),
    "boscarol": lambda m, n: (sum(C(k, m) * 2 ** (n - k) for k in range(m, n + 1))
                              + sum(C(k, n - m) * 2 ** (n - k) for k in range(n - m, n + 1))),
    "hor": lambda n: sum((-1) ** k * C(k, n) * C(n, k - n) for k in range(n, 2 * n + 1)),
    "hor_row_form": lambda n: sum((-1) ** k * C(n, k) * C(2 * n - k, n) for k in range(n + 1)),
    "knuth": lambda p, m, n: sum((-1) ** (p + n - k) * C(k, m) * C(n, k - p)
                                 for k in range(p, p + n + 1)),
    "fib_row": lambda n: sum(C(n, k) * _iter_fib(k) for k in range(n + 1)),
    "fib_quarterly": lambda n, m: sum(C(m, k) * (-1) ** (n + k) * _iter_fib(m - 2 * k)
                                      for k in range(n + 1)),
}


def oracle_sum(tid: str, bindings: Mapping[str, int]) -> Weight:
    """The left-hand side of catalog identity ``tid`` by naive summation."""
    try:
        fn = _ORACLE[tid]
    except KeyError:
        raise ValueError(f"unknown identity id {tid!r}") from None
    params = builtin_identity(tid).params
    try:
        args = [bindings[p] for p in params]
    except KeyError as exc:
        raise ValueError(f"{tid}: missing binding for {exc.args[0]}") from None
    return Weight.coerce(fn(*args))


def oracle_report(tid: str, bindings: Mapping[str, int]) -> dict[str, Weight]:
    """Both evaluation paths side by side: the identity language and the oracle."""
    from .lang import eval_expr

    ast = builtin_identity(tid)
    return {
        "dsl_lhs": eval_expr(ast.lhs, bindings, ast.indeterminates),
        "dsl_rhs": eval_expr(ast.rhs, bindings, ast.indeterminates),
        "oracle_lhs": oracle_sum(tid, bindings),
    }


# -- certificates ----------------------------------------------------------------------------

SCHEMA_VERSION = "1"

_CELL = {
    "type": "array",
    "prefixItems": [{"type": "integer", "minimum": 0}, {"type": "integer"}, {"type": "string"}],
    "items": False,
    "minItems": 3,
}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "theorem_id", "params", "identity", "initial", "steps",
                 "final", "value", "checked"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "theorem_id": {"type": "string"},
        "params": {"type": "object", "additionalProperties": {"type": "integer"}},
        "identity": {"type": "string"},
        "initial": {"type": "array", "items": _CELL},
        "final": {"type": "array", "items": _CELL},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule", "n", "k"],
                "additionalProperties": False,
                "properties": {
                    "rule": {"enum": sorted(STEP_TYPES)},
                    "n": {"type": "integer", "minimum": 0},
                    "k": {"type": "integer"},
                    "w": {"type": "string"},
                },
                "if": {"properties": {"rule": {"const": "swap_sym"}}},
                "then": {"not": {"required": ["w"]}},
                "else": {"required": ["w"]},
            },
        },
        "value": {"type": "string"},
        "checked": {"type": "boolean"},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(CERTIFICATE_SCHEMA)


@dataclass(frozen=True)
class Certificate:
    theorem_id: str
    params: dict
    identity: str
    initial: WeightedConfig
    steps: tuple
    final: WeightedConfig
    value: Weight
    checked: bool = False
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_script(cls, script: ProofScript, check: bool = True) -> Certificate:
        """Certificate for ``script``; ``checked`` is set only by a VALID check."""
        checked = False
        value = eval_config(script.initial)
        if check:
            report = check_script(script)
            checked = report.valid
        return cls(script.theorem_id, dict(script.params), script.identity_text,
                   script.initial, tuple(script.steps), script.expected_final, value, checked)

    def to_script(self) -> ProofScript:
        try:
            ast = parse_identity(self.identity)
        except ParseError as exc:
            raise CertificateError(f"$.identity: {exc}") from None
        return ProofScript(self.theorem_id, dict(self.params), self.initial, tuple(self.steps),
                           self.final, format_expr(ast.lhs), format_expr(ast.rhs),
                           self.identity)

    def check(self) -> CheckReport:
        """Re-check the certified content; the stored value must match too."""
        report = check_script(self.to_script())
        if report.valid and report.value != self.value:
            from .chase import CheckFailure
            return CheckReport(report.theorem_id, False, None, report.step_values, report.final,
                               failure=CheckFailure(None, "certificate value does not match",
                                                    str(report.value), str(self.value)))
        return report

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "theorem_id": self.theorem_id,
            "params": dict(self.params),
            "identity": self.identity,
            "initial": _cells_out(self.initial),
            "steps": [_step_out(s) for s in self.steps],
            "final": _cells_out(self.final),
            "value": format_weight(self.value),
            "checked": self.checked,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str | bytes) -> Certificate:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"not valid JSON: {exc}") from None
        return cls.from_json_dict(data)

    @classmethod
    def from_json_dict(cls, data) -> Certificate:
        if isinstance(data, dict) and "schema_version" in data \
                and data["schema_version"] != SCHEMA_VERSION:
            raise CertificateError(
                f"$.schema_version: unsupported schema version {data['schema_version']!r}")
        errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            raise CertificateError(f"{_json_path(err.absolute_path)}: {err.message}")
        return cls(
            theorem_id=data["theorem_id"],
            params=dict(data["params"]),
            identity=data["identity"],
            initial=_cells_in(data["initial"], "$.initial"),
            steps=tuple(_step_in(s, f"$.steps[{i}]") for i, s in enumerate(data["steps"])),
            final=_cells_in(data["final"], "$.final"),
            value=_weight_in(data["value"], "$.value"),
            checked=data["checked"],
        )


def _json_path(parts: Sequence) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _weight_in(text: str, path: str) -> Weight:
    try:
        return parse_weight(text)
    except WeightParseError as exc:
        raise CertificateError(f"{path}: {exc}") from None


def _cells_out(c: WeightedConfig) -> list:
    return [[n, k, format_weight(w)] for (n, k), w in c.items()]


def _cells_in(cells: list, path: str) -> WeightedConfig:
    out = []
    for i, (n, k, w) in enumerate(cells):
        if k < 0 or k > n:
            raise CertificateError(f"{path}[{i}]: cell ({n},{k}) lies outside the triangle")
        out.append(((n, k), _weight_in(w, f"{path}[{i}][2]")))
    return WeightedConfig(out)


def _step_out(s: RuleStep) -> dict:
    out = {"rule": s.rule, "n": s.n, "k": s.k}
    if not isinstance(s, SwapSym):
        out["w"] = format_weight(s.w)
    return out


def _step_in(d: dict, path: str) -> RuleStep:
    cls = STEP_TYPES[d["rule"]]
    if cls is SwapSym:
        return SwapSym(d["n"], d["k"])
    return cls(d["n"], d["k"], _weight_in(d["w"], f"{path}.w"))


__all__ = [
    "Certificate", "CertificateError", "CERTIFICATE_SCHEMA", "ParamRange", "SweepFailure",
    "SweepReport", "SweepSpec", "SweepSpecError", "fib_convention_tally", "load_sweep_toml",
    "oracle_report", "oracle_sum", "parse_range", "sweep",
]
