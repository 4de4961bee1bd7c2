"""Command-line front end: JSON configs in, deterministic JSON reports out.

Exit codes: 0 certified or verified, 2 mathematical negative, 3 budget
exceeded, 4 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .certify import Verdict, certify, sample_coefficients
from .errors import BudgetExceeded, CertificationError, ConfigError, FamilyError
from .maps import (
    ALPHA_NAME,
    DEFAULT_HORIZON,
    ceil_family,
    counterexample_family,
    family_from_descriptors,
    interleaved_family,
    shift_family,
)
from .operator import OperatorSpec, apply
from .oracles import SWEEPS, SweepConfig, run_all
from .scalars import FLOAT, RATIONAL, Q, SparseSeq, fmt, rational
from .witness import DEFAULT_LEVELS, WITNESS_BUDGET, build_periodic, build_witness, verify_witness, witness_json
from .words import DEFAULT_BUDGET

EXIT_OK, EXIT_NEGATIVE, EXIT_BUDGET, EXIT_CONFIG = 0, 2, 3, 4

DEFAULT_EPSILON = "1/10"


@dataclass
class RunConfig:
    family: list
    coeffs: list = field(default_factory=list)
    p: int = 1
    lam: str = "1"
    epsilon: str = DEFAULT_EPSILON
    levels: int = DEFAULT_LEVELS
    horizon: int = DEFAULT_HORIZON
    budget: Optional[int] = None
    seed: int = 0
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    box: list = field(default_factory=lambda: ["-1", "1"])
    samples: int = 10_000
    adapt: bool = False
    use_float: bool = False

    def to_json(self) -> dict:
        out = {
            "family": self.family, "coeffs": self.coeffs, "p": self.p, "lambda": self.lam,
            "epsilon": self.epsilon, "levels": self.levels, "horizon": self.horizon,
            "seed": self.seed, "x": self.x, "y": self.y, "box": self.box,
            "samples": self.samples, "adapt": self.adapt, "float": self.use_float,
        }
        if self.budget is not None:
            out["budget"] = self.budget
        return out

    @property
    def scalars(self):
        return FLOAT if self.use_float else RATIONAL

    def operator(self) -> OperatorSpec:
        try:
            fam = family_from_descriptors(self.family, self.horizon)
        except FamilyError as exc:
            raise ConfigError("$.family", str(exc)) from None
        coeffs = [_scalar(c, f"$.coeffs[{i}]", self.scalars) for i, c in enumerate(self.coeffs)]
        if len(coeffs) != fam.t:
            raise ConfigError("$.coeffs", f"expected {fam.t} coefficients, got {len(coeffs)}")
        lam = _scalar(self.lam, "$.lambda", self.scalars)
        if not lam > 0:
            raise ConfigError("$.lambda", "must be positive")
        return OperatorSpec(fam, coeffs, lam, self.p)

    def seq(self, name: str) -> SparseSeq:
        obj = getattr(self, name)
        for key, value in obj.items():
            _scalar(value, f"$.{name}[{key!r}]", self.scalars)
        try:
            return SparseSeq.from_json(obj, self.scalars)
        except ValueError as exc:
            raise ConfigError(f"$.{name}", str(exc)) from None


def _scalar(value, path, scalars=RATIONAL):
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise ConfigError(path, f"expected a rational string like \"3/2\", got {value!r}")
    try:
        return scalars.convert(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(path, str(exc)) from None


def _int(obj, key, default, lo=None):
    if key not in obj:
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"$.{key}", f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(f"$.{key}", f"must be >= {lo}")
    return v


def _seq_obj(obj, key):
    v = obj.get(key, {})
    if isinstance(v, list):
        v = {str(i): s for i, s in enumerate(v, 1) if s not in ("0", 0)}
    if not isinstance(v, dict):
        raise ConfigError(f"$.{key}", "expected an object {index: value} or a list")
    return {str(k): v[k] for k in v}


def parse_config(obj) -> RunConfig:
    """Validate a config object, raising ConfigError with the JSON path at fault."""
    if isinstance(obj, dict) and "command" in obj and isinstance(obj.get("config"), dict):
        obj = obj["config"]  # a previous report replays its own config
    if not isinstance(obj, dict):
        raise ConfigError("$", "config must be a JSON object")
    known = {"family", "coeffs", "p", "lambda", "epsilon", "levels", "horizon", "budget", "seed",
             "x", "y", "box", "samples", "adapt", "float"}
    # family descriptor files carry these; m is recomputed, never trusted
    known |= {"alpha", "m", "m_status"}
    if obj.get("alpha", ALPHA_NAME) != ALPHA_NAME:
        raise ConfigError("$.alpha", f"unsupported pairing {obj['alpha']!r}; only {ALPHA_NAME}")
    for key in obj:
        if key not in known:
            raise ConfigError(f"$.{key}", "unknown field")
    fam = obj.get("family")
    if not isinstance(fam, list) or not fam:
        raise ConfigError("$.family", "expected a non-empty list of map descriptors")
    for i, desc in enumerate(fam):
        if not isinstance(desc, dict) or "kind" not in desc:
            raise ConfigError(f"$.family[{i}]", "expected an object with a 'kind' field")
    coeffs = obj.get("coeffs", [])
    if not isinstance(coeffs, list):
        raise ConfigError("$.coeffs", "expected a list")
    use_float = obj.get("float", False)
    if not isinstance(use_float, bool):
        raise ConfigError("$.float", "expected true or false")
    scalars = FLOAT if use_float else RATIONAL
    cfg = RunConfig(
        family=fam,
        coeffs=[fmt(c) if isinstance(c, int) and not isinstance(c, bool) else c for c in coeffs],
        p=_int(obj, "p", 1, lo=1),
        lam=obj.get("lambda", "1"),
        epsilon=obj.get("epsilon", DEFAULT_EPSILON),
        levels=_int(obj, "levels", DEFAULT_LEVELS, lo=1),
        horizon=_int(obj, "horizon", DEFAULT_HORIZON, lo=1),
        budget=_int(obj, "budget", None, lo=1),
        seed=_int(obj, "seed", 0, lo=0),
        x=_seq_obj(obj, "x"),
        y=_seq_obj(obj, "y"),
        box=obj.get("box", ["-1", "1"]),
        samples=_int(obj, "samples", 10_000, lo=1),
        adapt=bool(obj.get("adapt", False)),
        use_float=use_float,
    )
    _scalar(cfg.lam, "$.lambda", scalars)
    eps = _scalar(cfg.epsilon, "$.epsilon", scalars)
    if not eps > 0:
        raise ConfigError("$.epsilon", "must be positive")
    if not isinstance(cfg.box, list):
        raise ConfigError("$.box", "expected [lo, hi] or a list of [lo, hi]")
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError("$", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(obj)


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "levels", None) is not None:
        cfg.levels = args.levels
    if getattr(args, "epsilon", None) is not None:
        _scalar(args.epsilon, "--epsilon")
        cfg.epsilon = args.epsilon
    if getattr(args, "horizon", None) is not None:
        cfg.horizon = args.horizon
    if getattr(args, "budget", None) is not None:
        cfg.budget = args.budget
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "samples", None) is not None:
        cfg.samples = args.samples
    if getattr(args, "adapt", False):
        cfg.adapt = True
    if getattr(args, "float", False):
        cfg.use_float = True
    return cfg


def make_report(command: str, cfg: Optional[RunConfig], result: dict, exit_code: int, **extra) -> dict:
    report = {
        "command": command,
        "version": __version__,
        "defaults": {
            "alpha": ALPHA_NAME,
            "levels": DEFAULT_LEVELS,
            "horizon": DEFAULT_HORIZON,
            "enumeration_budget": DEFAULT_BUDGET,
            "witness_budget": WITNESS_BUDGET,
        },
        "result": result,
        "exit_code": exit_code,
    }
    if cfg is not None:
        report["config"] = cfg.to_json()
    report.update(extra)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_certify(cfg: RunConfig):
    op = cfg.operator()
    cert = certify(op, cfg.budget or DEFAULT_BUDGET)
    code = EXIT_OK if cert.certified else EXIT_NEGATIVE
    return make_report("certify", cfg, {"certificate": cert.to_json()}, code), code


def _exact_only(cfg, command):
    if cfg.use_float:
        raise ConfigError("$.float", f"{command} is exact-only; float mode applies to certify")


def cmd_witness(cfg: RunConfig):
    _exact_only(cfg, "witness")
    op = cfg.operator()
    x, y = cfg.seq("x"), cfg.seq("y")
    cert = certify(op)
    if not cert.certified:
        result = {"certificate": cert.to_json(), "witness": None}
        return make_report("witness", cfg, result, EXIT_NEGATIVE), EXIT_NEGATIVE
    w, plan = build_witness(op, x, y, rational(cfg.epsilon), cfg.levels, adapt_n=cfg.adapt, cert=cert,
                            budget=cfg.budget or WITNESS_BUDGET)
    report = verify_witness(op, x, y, w, plan)
    code = EXIT_OK if report.within_budget else EXIT_NEGATIVE
    result = {"certificate": cert.to_json(), "witness": witness_json(w, plan, report)}
    return make_report("witness", cfg, result, code), code


def cmd_periodic(cfg: RunConfig):
    _exact_only(cfg, "periodic")
    op = cfg.operator()
    x = cfg.seq("x")
    cert = certify(op)
    if not cert.certified:
        result = {"certificate": cert.to_json(), "witness": None}
        return make_report("periodic", cfg, result, EXIT_NEGATIVE), EXIT_NEGATIVE
    w, plan, report = build_periodic(op, x, rational(cfg.epsilon), cfg.levels, adapt_n=cfg.adapt,
                                     cert=cert, budget=cfg.budget or WITNESS_BUDGET)
    ok = report.within_budget and report.mismatch_ok
    code = EXIT_OK if ok else EXIT_NEGATIVE
    result = {"certificate": cert.to_json(), "witness": witness_json(w, plan, report)}
    return make_report("periodic", cfg, result, code), code


def cmd_sample(cfg: RunConfig):
    _exact_only(cfg, "sample")
    try:
        fam = family_from_descriptors(cfg.family, cfg.horizon)
    except FamilyError as exc:
        raise ConfigError("$.family", str(exc)) from None
    try:
        res = sample_coefficients(fam, None, cfg.box, cfg.samples, seed=cfg.seed,
                                  budget=cfg.budget or DEFAULT_BUDGET)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError("$.box", str(exc)) from None
    code = EXIT_OK if not res.failures else EXIT_NEGATIVE
    result = {"m": fam.m, **res.to_json()}
    return make_report("sample", cfg, result, code), code


def family_descriptor(kind: str, t: Optional[int] = None, cs=None, d: int = 1,
                      horizon: int = DEFAULT_HORIZON) -> dict:
    """Descriptor file contents for a generated family, including its ``m``."""
    if kind == "interleaved":
        fam = interleaved_family(t)
    elif kind == "ceil":
        fam = ceil_family(cs, horizon)
    elif kind == "shift":
        fam = shift_family(d)
    elif kind == "counterexample":
        fam = counterexample_family()
    else:
        raise ConfigError("kind", f"unknown family kind {kind!r}")
    return fam.to_json()


def cmd_family(args):
    try:
        if args.kind == "interleaved" and (args.t is None or args.t < 2):
            raise ConfigError("--t", "interleaved families need t >= 2")
        if args.kind == "ceil" and not args.c:
            raise ConfigError("--c", "give at least one value, e.g. --c 3/2 --c 5/4")
        cs = [_scalar(c, f"--c[{i}]") for i, c in enumerate(args.c or [])]
        desc = family_descriptor(args.kind, args.t, cs, args.d, args.horizon or DEFAULT_HORIZON)
    except FamilyError as exc:
        raise ConfigError("--c" if args.kind == "ceil" else args.kind, str(exc)) from None
    return desc, EXIT_OK


def cmd_demo_counterexample(seed: int = 0, vectors: int = 5):
    fam = counterexample_family()
    bad = OperatorSpec(fam, (Q(2), Q(-2)), Q(17))
    good = OperatorSpec(fam, (Q(2), Q(2)), Q(17))
    cert_bad, cert_good = certify(bad), certify(good)
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(vectors):
        size = int(rng.integers(1, 9))
        x = SparseSeq({k: Q(int(rng.integers(-99, 100)), int(rng.integers(1, 50)))
                       for k in range(1, size + 1)})
        tx = apply(bad, x)
        samples.append({"x": x.to_json(), "Tx": tx.to_json(), "Tx_1": fmt(tx[1])})
    zero_first = all(s["Tx_1"] == "0" for s in samples)
    expected = (cert_bad.verdict is Verdict.NONZERO_FAILS and cert_good.certified and zero_first)
    code = EXIT_OK if expected else EXIT_NEGATIVE
    result = {
        "operator": bad.to_json(),
        "certificate": cert_bad.to_json(),
        "samples": samples,
        "first_coordinate_always_zero": zero_first,
        "contrast": {"operator": good.to_json(), "certificate": cert_good.to_json()},
    }
    return make_report("demo-counterexample", None, result, code, seed=seed), code


def cmd_propcheck(args):
    cfg = load_config(args.config)
    if args.horizon is not None:
        cfg.horizon = args.horizon
    try:
        fam = family_from_descriptors(cfg.family, cfg.horizon)
    except FamilyError as exc:
        raise ConfigError("$.family", str(exc)) from None
    coeffs = None
    if cfg.coeffs:
        coeffs = [_scalar(c, f"$.coeffs[{i}]") for i, c in enumerate(cfg.coeffs)]
        if len(coeffs) != fam.t:
            raise ConfigError("$.coeffs", f"expected {fam.t} coefficients, got {len(coeffs)}")
    names = args.sweep or None
    for name in names or []:
        if name not in SWEEPS:
            raise ConfigError("--sweep", f"unknown sweep {name!r}; choose from {sorted(SWEEPS)}")
    scfg = SweepConfig(fam, coeffs, args.rmax, args.kmax, budget=cfg.budget or DEFAULT_BUDGET,
                       mode=args.mode)
    results = run_all(scfg, names)
    ok = all(r.ok for r in results.values())
    code = EXIT_OK if ok else EXIT_NEGATIVE
    result = {"m": fam.m, "sweeps": {k: v.to_json() for k, v in results.items()}}
    report = make_report("propcheck", cfg, result, code,
                         sweep={"rmax": args.rmax, "kmax": args.kmax, "mode": args.mode})
    return report, code


# -- argument parsing ----------------------------------------------------------


def _common(p, config=True):
    if config:
        p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--horizon", type=int, metavar="N")
    p.add_argument("--budget", type=int, metavar="N")


def _add_propcheck_args(p):
    _common(p)
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--kmax", type=int, default=25)
    p.add_argument("--mode", choices=("ci", "audit"), default="ci")
    p.add_argument("--sweep", action="append", metavar="NAME", help=f"one of {', '.join(SWEEPS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rolewicz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="decide the sufficient conditions for chaos")
    _common(p)
    p.add_argument("--float", action="store_true", help="diagnostic float mode (never certifies)")

    for name, helptext in (("witness", "build and verify a transitivity witness"),
                           ("periodic", "build and verify a periodic point")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--levels", type=int, metavar="L")
        p.add_argument("--epsilon", metavar="RAT")
        p.add_argument("--adapt", action="store_true", help="raise n until the exact budgets hold")

    p = sub.add_parser("family", help="write a family descriptor file")
    p.add_argument("kind", choices=("interleaved", "ceil", "shift", "counterexample"))
    p.add_argument("--t", type=int)
    p.add_argument("--c", action="append", metavar="RAT")
    p.add_argument("--d", type=int, default=1)
    _common(p, config=False)

    p = sub.add_parser("sample", help="sample coefficients against the non-zero condition")
    _common(p)
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--samples", type=int, metavar="N")

    p = sub.add_parser("demo-counterexample", help="the vanishing first coordinate example")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seed", type=int, default=0, metavar="N")

    p = sub.add_parser("propcheck", help="brute-force proposition sweeps")
    _add_propcheck_args(p)
    return parser


def _emit(payload: dict, out: Optional[str]) -> None:
    text = dumps(payload)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, exc: Exception, code: int, **fields) -> int:
    sys.stderr.write(dumps({"error": kind, "message": str(exc), "exit_code": code, **fields}))
    return code


def run(args) -> int:
    try:
        if args.command == "family":
            payload, code = cmd_family(args)
        elif args.command == "demo-counterexample":
            payload, code = cmd_demo_counterexample(args.seed)
        elif args.command == "propcheck":
            payload, code = cmd_propcheck(args)
        else:
            cfg = _apply_flags(load_config(args.config), args)
            handler = {"certify": cmd_certify, "witness": cmd_witness,
                       "periodic": cmd_periodic, "sample": cmd_sample}[args.command]
            payload, code = handler(cfg)
    except ConfigError as exc:
        return _error("config", exc, EXIT_CONFIG, path=exc.path)
    except BudgetExceeded as exc:
        return _error("budget", exc, EXIT_BUDGET, needed=exc.needed, budget=exc.budget)
    except CertificationError as exc:
        return _error("certification", exc, EXIT_NEGATIVE)
    _emit(payload, args.out)
    return code


def main(argv=None) -> int:
    return run(build_parser().parse_args(argv))


def propcheck_main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="propcheck", description="brute-force proposition sweeps")
    _add_propcheck_args(parser)
    args = parser.parse_args(argv)
    args.command = "propcheck"
    return run(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
