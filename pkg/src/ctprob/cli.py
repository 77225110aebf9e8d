"""Command line front end.

    ctprob run --preset exp1 [--samples N --seed K] [--format csv|json] [--out DIR]
    ctprob verify-axioms --omega-size 200 --trials 1000 --seed 7
    ctprob density --preset exp2 [--time T] [--format csv|json] [--out FILE]

Exit codes: 0 success, 2 invalid configuration, 3 capacity guard exceeded,
4 internal invariant violated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import MeasureContext, verify_axioms
from .density import check_density, density_for
from .errors import CapacityError, CTPError, InvariantViolation
from .experiments import (
    PRESETS,
    ScreenPattern,
    SlitExperiment,
    check_pattern,
    classical_baseline,
    default_lattice,
    pattern,
)
from .lattice import LatticeConfig
from .sampling import normalize, sample

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_INVARIANT = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    """Mirror of the JSON config file."""

    lattice: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)
    sampling: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_preset(cls, name: str) -> "RunConfig":
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        p = PRESETS[name]
        cfg = default_lattice()
        return cls(
            lattice=dict(sites=cfg.sites, steps=cfg.steps, alpha=cfg.alpha, hop_range=None),
            experiment=dict(source=p["source"], barrier_t=p["barrier_t"],
                            slits=list(p["slits"]), measured=list(p["measured"])),
        )

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        unknown = set(raw) - {"lattice", "experiment", "sampling", "output"}
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        return cls(**{k: dict(v) for k, v in raw.items()})

    def build(self) -> SlitExperiment:
        """Validate every field and construct the experiment."""
        lat = dict(self.lattice)
        ex = dict(self.experiment)
        try:
            hop = lat.get("hop_range")
            if hop in ("all", None):
                hop = None
            config = LatticeConfig(
                sites=int(lat.get("sites", 64)),
                steps=int(lat.get("steps", 8)),
                alpha=float(lat.get("alpha", 0.5)),
                hop_range=None if hop is None else int(hop),
            )
            exp = SlitExperiment(
                config,
                source=int(ex["source"]),
                barrier_t=int(ex["barrier_t"]),
                slits=tuple(int(s) for s in ex["slits"]),
                measured=frozenset(int(m) for m in ex.get("measured", ())),
            )
        except KeyError as exc:
            raise ConfigError(f"missing experiment field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        n = self.sampling.get("n")
        if n is not None and int(n) < 1:
            raise ConfigError("sampling.n must be positive")
        if self.output.get("format", "csv") not in ("csv", "json"):
            raise ConfigError("output.format must be csv or json")
        return exp


# pattern I/O -----------------------------------------------------------

def pattern_columns(pat: ScreenPattern) -> list[str]:
    cols = ["x", "total", "direct", "interference_re", "interference_im"]
    return cols + [f"prob_slit{k}" for k in range(1, pat.slit_amps.shape[0] + 1)]


def pattern_rows(pat: ScreenPattern):
    for x in range(pat.total.shape[0]):
        row = [str(x), fmt(pat.total[x].real), fmt(pat.direct[x]),
               fmt(pat.interference[x].real), fmt(pat.interference[x].imag)]
        row += [fmt(v) for v in pat.slit_probs[:, x]]
        yield row


def pattern_to_csv(pat: ScreenPattern) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(pattern_columns(pat))
    w.writerows(pattern_rows(pat))
    return buf.getvalue()


def pattern_to_json(pat: ScreenPattern) -> str:
    cols = pattern_columns(pat)
    data = {c: [] for c in cols}
    for row in pattern_rows(pat):
        for c, v in zip(cols, row):
            data[c].append(int(v) if c == "x" else float(v))
    data["slits"] = list(pat.slits)
    data["measured"] = sorted(pat.measured)
    return json.dumps(data)


def read_pattern_csv(text: str) -> dict[str, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return {h: np.array([float(r[i]) for r in body]) for i, h in enumerate(header)}


def recompute_derived(cols: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Recompute ``direct`` and ``total`` from the stored per-slit columns."""
    probs = [cols[c] for c in cols if c.startswith("prob_slit")]
    direct = np.zeros_like(probs[0])
    for p in probs:
        direct = direct + p
    return {"direct": direct, "total": direct + cols["interference_re"]}


# density I/O -----------------------------------------------------------

def density_to_json(rho, report) -> str:
    m = rho.entries
    flat = [[float(v.real), float(v.imag)] for v in m.ravel()]
    return json.dumps({"shape": list(m.shape), "time": rho.time, "entries": flat,
                       "report": report})


def density_to_csv(rho) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    S = rho.entries.shape[1]
    w.writerow([f"{p}{j}" for j in range(S) for p in ("re", "im")])
    for row in rho.entries:
        w.writerow([s for v in row for s in (fmt(v.real), fmt(v.imag))])
    return buf.getvalue()


# commands --------------------------------------------------------------

def _resolve(args) -> RunConfig:
    if args.config:
        rc = RunConfig.from_file(args.config)
    else:
        rc = RunConfig.from_preset(args.preset or "exp1")
    for key in ("sites", "steps", "alpha"):
        v = getattr(args, key, None)
        if v is not None:
            rc.lattice[key] = v
    if getattr(args, "hop_range", None) is not None:
        rc.lattice["hop_range"] = args.hop_range
    if getattr(args, "slits", None) is not None:
        rc.experiment["slits"] = _int_list(args.slits)
    if getattr(args, "measured", None) is not None:
        rc.experiment["measured"] = _int_list(args.measured)
    if getattr(args, "samples", None) is not None:
        rc.sampling["n"] = args.samples
    if getattr(args, "seed", None) is not None:
        rc.sampling["seed"] = args.seed
    if getattr(args, "format", None) is not None:
        rc.output["format"] = args.format
    if getattr(args, "out", None) is not None:
        rc.output["path"] = args.out
    return rc


def _int_list(text: str) -> list[int]:
    if text.strip() == "":
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected comma separated integers, got {text!r}") from None


def _write(path: Path | None, text: str, out):
    if path is None:
        out.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def cmd_run(args, out) -> int:
    rc = _resolve(args)
    exp = rc.build()
    fmt_name = rc.output.get("format", "csv")
    pat = pattern(exp)
    base = classical_baseline(exp)
    for name, pt in (("pattern", pat), ("classical", base)):
        for inv, res in check_pattern(pt).items():
            if res > 1e-12:
                raise InvariantViolation(f"{name}: {inv}", res)
    render = pattern_to_csv if fmt_name == "csv" else pattern_to_json
    dest = rc.output.get("path")
    freq = None
    if rc.sampling.get("n"):
        freq = sample(normalize(pat), int(rc.sampling["n"]), int(rc.sampling.get("seed", 0)))
    if dest is None:
        out.write(render(pat))
        if freq is not None:
            sys.stderr.write(freq.to_json() + "\n")
        return EXIT_OK
    d = Path(dest)
    d.mkdir(parents=True, exist_ok=True)
    _write(d / f"pattern.{fmt_name}", render(pat), out)
    _write(d / f"classical.{fmt_name}", render(base), out)
    if freq is not None:
        _write(d / "frequency.json", freq.to_json() + "\n", out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    ctx = MeasureContext.random(args.omega_size, args.seed,
                                sites=args.sites or 8, steps=args.steps or 4)
    rep = verify_axioms(ctx, args.trials, args.seed)
    out.write(json.dumps(rep.as_dict(), default=float, indent=1) + "\n")
    if not rep.passed:
        sys.stderr.write("axiom check failed: " + "; ".join(rep.failures) + "\n")
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_density(args, out) -> int:
    rc = _resolve(args)
    exp = rc.build()
    t = exp.screen_t if args.time is None else args.time
    if not exp.barrier_t <= t <= exp.screen_t:
        raise ConfigError(f"--time must lie in [{exp.barrier_t}, {exp.screen_t}]")
    rho = density_for(exp, t)
    report = rho.report()
    checks = check_density(rho)
    if checks["hermitian"] > 1e-12:
        raise InvariantViolation("density hermiticity", checks["hermitian"])
    if checks["psd"] > 1e-10:
        raise InvariantViolation("density positivity", checks["psd"])
    fmt_name = rc.output.get("format", "json")
    text = density_to_json(rho, report) if fmt_name == "json" else density_to_csv(rho)
    dest = rc.output.get("path")
    _write(None if dest is None else Path(dest), text, out)
    if fmt_name == "csv" or dest is not None:
        sys.stderr.write(json.dumps(report) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment_flags(p):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--sites", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--hop-range", dest="hop_range")
        p.add_argument("--slits", help="comma separated slit sites")
        p.add_argument("--measured", help="comma separated 1-based slit indices")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out")

    run = sub.add_parser("run", help="screen pattern, classical baseline, frequencies")
    experiment_flags(run)
    run.add_argument("--samples", type=int)
    run.add_argument("--seed", type=int)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify-axioms", help="random-event axiom suite")
    ver.add_argument("--omega-size", type=int, default=200)
    ver.add_argument("--trials", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--sites", type=int)
    ver.add_argument("--steps", type=int)
    ver.set_defaults(func=cmd_verify)

    den = sub.add_parser("density", help="density matrix at a slice with invariant report")
    experiment_flags(den)
    den.add_argument("--time", type=int)
    den.set_defaults(func=cmd_density)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CapacityError as exc:
        sys.stderr.write(f"capacity: {exc}\n")
        return EXIT_CAPACITY
    except InvariantViolation as exc:
        sys.stderr.write(f"invariant violated: {exc}\n")
        return EXIT_INVARIANT
    except (ConfigError, CTPError, ValueError) as exc:
        sys.stderr.write(f"invalid config: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
