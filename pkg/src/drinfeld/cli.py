"""Command-line front end: reproducible experiments, machine-readable output.

Every run embeds its full configuration and the library version in the
payload; for the json and csv formats the emitted bytes are a deterministic
function of (config, seed). Exit code 0 on success, 2 on validation or
envelope errors. Theorem q-range gates are surfaced as warnings, never as
errors: computations outside them are still meaningful as data.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .criteria import ray_criterion, s_r_membership, theorem_gate
from .density import exact_counts, exhaustive_density, monte_carlo_density
from .errors import EnvelopeError
from .galois import accumulate_image, accumulate_image_mod_T2
from .gf import FieldCtx, field_new
from .matgroup import aschbacher_obstructions
from .modules import (
    drinfeld_module,
    newton_polygon,
    ramification_denominator,
    reduction_at,
    torsion_poly,
)
from .polyring import PrimeIdeal, factor, parse_poly

COMMANDS = ("check", "ray-check", "reduction", "newton", "galois-image",
            "galois-image-t2", "density", "aschbacher", "factor", "torsion")


@dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    k: int = 1
    rank: Optional[int] = None
    g: Optional[str] = None
    l: Optional[str] = None
    a: Optional[str] = None
    f: Optional[str] = None
    q: Optional[int] = None
    N: Optional[int] = None
    mode: str = "exhaustive"
    samples: int = 10_000
    max_primes: int = 200
    max_deg: int = 3
    seed: int = 0
    jobs: int = 1
    format: str = "json"
    output: Optional[str] = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(RunConfig)}
        return RunConfig(**{k: v for k, v in d.items() if k in names})


def _split_coefficients(text: str) -> list[str]:
    """Split "[1],[1,1]" or "1;T+1" into per-coefficient strings."""
    if ";" in text:
        return [t for t in text.split(";") if t.strip()]
    parts = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return parts


def _require(cfg: RunConfig, *names: str) -> None:
    for n in names:
        if getattr(cfg, n) is None:
            raise ValueError(f"--{n.replace('_', '-')} is required "
                             f"for '{cfg.command}'")


def _field(cfg: RunConfig) -> FieldCtx:
    _require(cfg, "p")
    return field_new(cfg.p, cfg.k)


def _module(cfg: RunConfig):
    ctx = _field(cfg)
    _require(cfg, "rank", "g")
    coeffs = [parse_poly(ctx, t) for t in _split_coefficients(cfg.g)]
    if len(coeffs) != cfg.rank:
        raise ValueError(
            f"--rank {cfg.rank} but {len(coeffs)} coefficients given")
    return drinfeld_module(ctx, coeffs)


def _prime(cfg: RunConfig, ctx: FieldCtx) -> PrimeIdeal:
    _require(cfg, "l")
    return PrimeIdeal(parse_poly(ctx, cfg.l).monic())


def _gate_warnings(rank: int, q: int) -> list[str]:
    if theorem_gate(rank, q):
        return []
    if rank == 2:
        return [f"q = {q} is outside the rank-2 theorem gate (q >= 4); "
                "results are data, not a theorem instance"]
    if rank == 3:
        return [f"q = {q} is outside the rank-3 theorem gate (q > 9 odd); "
                "results are data, not a theorem instance"]
    return [f"no surjectivity theorem covers rank {rank}"]


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute a command; returns (exit_code, report payload)."""
    result: dict
    warnings: list[str] = []
    if cfg.command == "check":
        m = _module(cfg)
        warnings = _gate_warnings(m.rank, m.q)
        result = s_r_membership(m, seed=cfg.seed).to_dict()
    elif cfg.command == "ray-check":
        m = _module(cfg)
        result = ray_criterion(m).to_dict()
        if not result["theoremApplicable"]:
            warnings = [f"q = {m.q} is outside this criterion's gate "
                        "(q >= 5 odd)"]
    elif cfg.command == "reduction":
        m = _module(cfg)
        result = reduction_at(m, _prime(cfg, m.ctx)).to_dict()
    elif cfg.command == "newton":
        m = _module(cfg)
        _require(cfg, "a")
        a = parse_poly(m.ctx, cfg.a)
        np_ = newton_polygon(m, a, _prime(cfg, m.ctx))
        result = np_.to_dict()
        result["ramificationDenominators"] = ramification_denominator(np_)
    elif cfg.command == "galois-image":
        m = _module(cfg)
        warnings = _gate_warnings(m.rank, m.q)
        rep = accumulate_image(m, max_primes=cfg.max_primes,
                               max_deg=cfg.max_deg)
        result = rep.to_dict()
        if m.rank == 3:
            result["modT2"] = {
                "status": "skipped",
                "reason": "mod-T^2 sampling is out of envelope for rank 3 "
                          f"(limited to rank 2, q <= 5); q = {m.q}",
            }
    elif cfg.command == "galois-image-t2":
        m = _module(cfg)
        rep = accumulate_image_mod_T2(m, max_primes=cfg.max_primes,
                                      max_deg=cfg.max_deg)
        result = rep.to_dict()
    elif cfg.command == "density":
        ctx = _field(cfg)
        _require(cfg, "rank", "N")
        if cfg.mode == "exhaustive":
            rep = exhaustive_density(ctx, cfg.rank, cfg.N,
                                     shards=max(1, cfg.jobs))
        elif cfg.mode == "closed-form":
            rep = exact_counts(ctx, cfg.rank, cfg.N)
        elif cfg.mode == "monte-carlo":
            rep = monte_carlo_density(ctx, cfg.rank, cfg.N, cfg.samples,
                                      cfg.seed)
        else:
            raise ValueError(f"unknown density mode {cfg.mode!r}")
        result = rep.to_dict()
    elif cfg.command == "aschbacher":
        if cfg.q is None:
            raise ValueError("--q is required for 'aschbacher'")
        result = aschbacher_obstructions(cfg.q).to_dict()
    elif cfg.command == "factor":
        ctx = _field(cfg)
        _require(cfg, "f")
        fac = factor(parse_poly(ctx, cfg.f), seed=cfg.seed)
        result = {
            "unit": fac.unit,
            "factors": [{"prime": str(pr), "coeffs": list(pr.gen.coeffs),
                         "multiplicity": mult} for pr, mult in fac.factors],
        }
    elif cfg.command == "torsion":
        m = _module(cfg)
        _require(cfg, "a")
        pairs = torsion_poly(m, parse_poly(m.ctx, cfg.a))
        result = {"linearized": [{"qExponent": i, "coeffs": list(c.coeffs)}
                                 for i, c in pairs]}
    else:
        raise ValueError(f"unknown command {cfg.command!r}")
    payload = {
        "command": cfg.command,
        "version": __version__,
        "config": cfg.to_dict(),
        "warnings": warnings,
        "result": result,
    }
    return 0, payload


def render(cfg: RunConfig, payload: dict) -> str:
    if cfg.format == "json":
        return json.dumps(payload, sort_keys=True,
                          separators=(",", ":")) + "\n"
    if cfg.format == "csv":
        if cfg.command != "density":
            raise ValueError("csv output is defined for 'density' only")
        from .density import DensityReport

        r = payload["result"]
        lines = [DensityReport.CSV_HEADER]
        ratio = f"{r['ratioS1']['num']}/{r['ratioS1']['den']}"
        limit = f"{r['limit']['num']}/{r['limit']['den']}"
        s = r.get("sCount", "")
        est = r.get("sEstimate", {}).get("value", "") if "sEstimate" in r else ""
        lines.append(
            f"{r['q']},{r['r']},{r['N']},{r['mode']},{r['wCount']},"
            f"{r['s1Count']},{s},{est},{ratio},{limit}")
        return "\n".join(lines) + "\n"
    if cfg.format == "pretty":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown format {cfg.format!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="drinfeld",
        description="Surjectivity criteria and Galois-image experiments "
                    "for rank 2 and 3 Drinfeld modules over F_q[T]",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p", type=int, help="field characteristic")
    ap.add_argument("--k", type=int, default=1, help="field degree: q = p^k")
    ap.add_argument("--rank", type=int)
    ap.add_argument("--g", help='module coefficients, e.g. "[1],[1,1]" '
                                'or "1;T+1"')
    ap.add_argument("--l", help='prime generator, e.g. "T+1"')
    ap.add_argument("--a", help='ring element for torsion/newton, e.g. "T"')
    ap.add_argument("--f", help="polynomial to factor")
    ap.add_argument("--q", type=int, help="prime power for 'aschbacher'")
    ap.add_argument("--N", type=int, help="degree bound for density")
    ap.add_argument("--mode", default="exhaustive",
                    choices=("exhaustive", "closed-form", "monte-carlo"))
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--max-primes", type=int, default=200, dest="max_primes")
    ap.add_argument("--max-deg", type=int, default=3, dest="max_deg")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker cap (density shard count)")
    ap.add_argument("--format", default="json",
                    choices=("json", "csv", "pretty"))
    ap.add_argument("--output", help="write the report to this file "
                                     "(relative paths resolve against "
                                     "$DRINFELD_REPORT_DIR if set)")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    try:
        code, payload = run(cfg)
        text = render(cfg, payload)
    except (ValueError, EnvelopeError, ZeroDivisionError) as e:
        err = {"error": str(e), "command": cfg.command,
               "config": cfg.to_dict(), "version": __version__}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 2
    if cfg.output:
        path = cfg.output
        base = os.environ.get("DRINFELD_REPORT_DIR")
        if base and not os.path.isabs(path):
            path = os.path.join(base, path)
        with open(path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
