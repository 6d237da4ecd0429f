"""Command-line front end.

    cloudcover quote --profile consumer --years 1
    cloudcover verify --profile business --years 5 --n-paths 1000000
    cloudcover sweep volatility --years 1 --grid wide --format csv
    cloudcover settle --measure risk-neutral --n-paths 100000
    cloudcover fit prices.csv --format json

Exit codes: 0 success, 2 invalid input, 3 Monte Carlo disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .errors import ValidationError
from .market_model import (
    REFERENCE_BETA,
    GbmParams,
    PricePath,
    TrendParams,
    estimate_volatility,
    expected_price,
    fit_exponential_trend,
    read_price_csv,
    simulate_gbm_path,
    simulate_risk_neutral_path,
)
from .oracle import mc_contract_price, mc_period_price
from .pricing import MONTH, TREASURY_CURVE, ContractSpec, RateCurve, contract_premium, period_premium
from .risk import MEASURES, settle_contract, settlement_statistics
from .scenarios import (
    DEFAULT_SIGMA_GRID,
    PROFILES,
    WIDE_SIGMA_GRID,
    ScenarioConfig,
    duration_sweep,
    monthly_durations,
    volatility_sweep,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY_FAILED = 3

FORMATS = ("table", "csv", "json")
DEFAULT_SEED = 20120101
DEFAULT_VERIFY_PATHS = 1_000_000
DEFAULT_SETTLE_PATHS = 100_000


@dataclass
class AppConfig:
    """Settings merged from defaults, ``--config`` and command-line flags."""

    profile: str = "consumer"
    beta: float = REFERENCE_BETA
    sigma: float | None = None
    s0: float = 1.0
    rate: float | None = None
    rate_curve: str | None = None
    period_length: float = MONTH
    n_periods: int | None = None
    years: float = 1.0
    seed: int = DEFAULT_SEED
    n_paths: int | None = None
    format: str = "table"

    def contract(self) -> ContractSpec:
        if self.profile not in PROFILES:
            raise ValidationError(f"unknown profile {self.profile!r}; choose from {sorted(PROFILES)}")
        if self.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}")
        sigma = PROFILES[self.profile] if self.sigma is None else self.sigma
        n = self.n_periods
        if n is None:
            if not self.years > 0:
                raise ValidationError("years must be positive")
            n_float = self.years / self.period_length
            if abs(n_float - round(n_float)) > 1e-9 * max(1.0, n_float):
                raise ValidationError("years must be a multiple of the period length")
            n = int(round(n_float))
        return ContractSpec(self.s0, self.beta, sigma, n, self.curve(), self.period_length)

    def curve(self) -> RateCurve:
        if self.rate is not None:
            return RateCurve.flat(self.rate)
        if self.rate_curve is not None:
            return parse_rate_curve(self.rate_curve)
        return TREASURY_CURVE


_CONFIG_TYPES = {f.name: f.type for f in fields(AppConfig)}


def _coerce(key: str, raw: str):
    kind = _CONFIG_TYPES[key]
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


def parse_rate_curve(text: str) -> RateCurve:
    """Parse ``"1:0.002,5:0.0099"`` (tenor:rate pairs)."""
    try:
        pairs = [item.split(":") for item in text.split(",") if item.strip()]
        tenors = [float(a) for a, _ in pairs]
        rates = [float(b) for _, b in pairs]
    except ValueError:
        raise ValidationError(f"cannot parse rate curve {text!r}; expected 'tenor:rate,...'") from None
    return RateCurve(tuple(tenors), tuple(rates))


def load_config(path: str | Path) -> dict:
    """Read a ``key = value`` file; ``#`` starts a comment. Unknown keys are rejected."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def resolve_config(args: argparse.Namespace) -> AppConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for name in _CONFIG_TYPES:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    return AppConfig(**values)


# -- output helpers ------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.4g}"
    return str(x)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _kv(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(obj)
    flat = {k: v for k, v in obj.items() if not isinstance(v, dict)}
    for k, v in obj.items():
        if isinstance(v, dict):
            flat.update({f"{k}.{kk}": vv for kk, vv in v.items()})
    if fmt == "csv":
        return _csv(list(flat), [list(flat.values())])
    width = max(len(k) for k in flat)
    return "".join(f"{k.ljust(width)}  {_fmt(v)}\n" for k, v in flat.items())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _contract_dict(spec: ContractSpec) -> dict:
    return {
        "s0": spec.s0,
        "beta": spec.beta,
        "sigma": spec.sigma,
        "rate": spec.rate,
        "n_periods": spec.n_periods,
        "period_length": spec.period_length,
    }


# -- commands ------------------------------------------------------------------


def cmd_fit(args, cfg: AppConfig) -> int:
    try:
        series = read_price_csv(args.csv_path)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {args.csv_path}") from None
    if len(series) < 2:
        raise ValidationError(f"{args.csv_path}: need at least 2 price rows to fit a trend, got {len(series)}")
    trend = fit_exponential_trend(series)
    try:
        vol = estimate_volatility(series, mode="time_series")
    except ValidationError:
        vol = None
    result = {
        "n_observations": len(series),
        "p0": trend.p0,
        "beta": trend.beta,
        "volatility": vol,
    }
    if cfg.format == "table":
        result = {k: ("n/a" if v is None else v) for k, v in result.items()}
    _emit(_kv(result, cfg.format), args.out)
    return EXIT_OK


def cmd_quote(args, cfg: AppConfig) -> int:
    spec = cfg.contract()
    sched = contract_premium(spec)
    if cfg.format == "json":
        text = _json({"contract": _contract_dict(spec), **sched.to_dict()})
    else:
        header = ["period", "t", "premium", "premium_normalized"]
        rows = [[p.period, p.t, p.premium, p.premium_normalized] for p in sched.per_period]
        rows.append(["total", "", sched.total, sched.total_normalized])
        text = (_csv if cfg.format == "csv" else _table)(header, rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args, cfg: AppConfig) -> int:
    spec = cfg.contract()
    n_paths = cfg.n_paths or DEFAULT_VERIFY_PATHS
    if args.period is None:
        closed = contract_premium(spec).total
        est = mc_contract_price(spec, n_paths, cfg.seed, rate=args.mc_rate, workers=args.workers)
    else:
        closed = period_premium(spec, args.period)
        est = mc_period_price(spec, args.period, n_paths, cfg.seed, rate=args.mc_rate,
                              workers=args.workers)
    z = est.z_score(closed)
    passed = abs(z) <= args.threshold
    report = {
        "contract": _contract_dict(spec),
        "period": "all" if args.period is None else args.period,
        "closed_form": closed,
        "mc_mean": est.mean,
        "std_error": est.std_error,
        "z": z,
        "threshold": args.threshold,
        "n_paths": est.n_paths,
        "seed": est.seed,
        "mc_rate": spec.rate if args.mc_rate is None else args.mc_rate,
        "passed": passed,
    }
    _emit(_kv(report, cfg.format), args.out)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _parse_grid(text: str | None, kind: str) -> list[float]:
    if kind == "volatility":
        presets = {None: DEFAULT_SIGMA_GRID, "default": DEFAULT_SIGMA_GRID, "wide": WIDE_SIGMA_GRID}
    else:
        presets = {None: monthly_durations(1, 60), "default": monthly_durations(1, 60)}
    if text in presets:
        return list(presets[text])
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse grid {text!r}") from None


def cmd_sweep(args, cfg: AppConfig) -> int:
    spec = cfg.contract()
    grid = _parse_grid(args.grid, args.kind)
    base = ScenarioConfig(
        label=args.kind,
        sigma=spec.sigma,
        duration_years=spec.maturity,
        rate=cfg.rate,
        beta=spec.beta,
        s0=spec.s0,
        period_length=spec.period_length,
    )
    curve = cfg.curve()
    if args.kind == "volatility":
        res = volatility_sweep(base, grid, curve)
    else:
        res = duration_sweep(base, grid, curve)
    if cfg.format == "json":
        text = res.to_json() + "\n"
    elif cfg.format == "csv":
        text = res.to_csv()
    else:
        text = _table(["x", "total_normalized", "relative_change"],
                      [list(r) for r in zip(res.axis, res.totals, res.relative_change)])
    _emit(text, args.out)
    return EXIT_OK


def _first_path(spec: ContractSpec, measure: str, seed: int) -> PricePath:
    times = spec.settlement_times()
    if measure == "trend":
        return PricePath(times, expected_price(TrendParams(spec.s0, spec.beta), times), seed)
    params = GbmParams(spec.s0, spec.beta, spec.sigma)
    if measure == "risk-neutral":
        return simulate_risk_neutral_path(params, spec.rate, times, seed)
    return simulate_gbm_path(params, times, seed)


def cmd_settle(args, cfg: AppConfig) -> int:
    spec = cfg.contract()
    n_paths = cfg.n_paths or DEFAULT_SETTLE_PATHS
    premium = contract_premium(spec).total
    stats = settlement_statistics(spec, n_paths, cfg.seed, args.measure)
    report = stats.to_dict()
    report["closed_form_premium"] = premium
    report["z"] = (stats.mean - premium) / stats.std_error if stats.std_error > 0 else None
    if cfg.format == "table" and report["z"] is None:
        report["z"] = "n/a"
    _emit(_kv(report, cfg.format), args.out)
    if args.schedule_out:
        sched = settle_contract(spec, _first_path(spec, args.measure, cfg.seed), premium)
        target = Path(args.schedule_out)
        target.write_text(sched.to_json() + "\n" if target.suffix == ".json" else sched.to_csv())
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=d, help="key=value settings file")
    parser.add_argument("--format", choices=FORMATS, default=d)
    parser.add_argument("--seed", type=int, default=d)
    parser.add_argument("--out", metavar="PATH", default=d, help="write output here instead of stdout")


def _contract_options(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("contract")
    g.add_argument("--profile", choices=sorted(PROFILES), help="volatility preset (default consumer)")
    g.add_argument("--years", type=float, help="coverage length in years (default 1)")
    g.add_argument("--n-periods", dest="n_periods", type=int, help="number of settlements; overrides --years")
    g.add_argument("--period-length", dest="period_length", type=float, help="years between settlements (default 1/12)")
    g.add_argument("--s0", type=float, help="current unit price (default 1, i.e. normalized)")
    g.add_argument("--beta", type=float, help=f"trend decay rate per year (default {REFERENCE_BETA})")
    g.add_argument("--sigma", type=float, help="volatility; overrides --profile")
    g.add_argument("--rate", type=float, help="flat risk-free rate")
    g.add_argument("--rate-curve", dest="rate_curve", help="tenor:rate pairs, e.g. 1:0.002,5:0.0099")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloudcover",
        description="Premiums for insurance against cloud storage prices rising above trend.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit the exponential trend to a date,price CSV")
    p.add_argument("csv_path")
    _global_options(p, suppress=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("quote", help="closed-form premium schedule")
    _contract_options(p)
    _global_options(p, suppress=True)
    p.set_defaults(func=cmd_quote)

    p = sub.add_parser("verify", help="compare the closed form with Monte Carlo")
    _contract_options(p)
    p.add_argument("--n-paths", dest="n_paths", type=int)
    p.add_argument("--period", type=int, help="check a single period instead of the whole contract")
    p.add_argument("--threshold", type=float, default=4.0, help="max |z| accepted (default 4)")
    p.add_argument("--mc-rate", dest="mc_rate", type=float,
                   help="simulate with this rate instead (self-test of the detector)")
    p.add_argument("--workers", type=int, default=1)
    _global_options(p, suppress=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="premium sensitivity to volatility or duration")
    p.add_argument("kind", choices=("volatility", "duration"))
    _contract_options(p)
    p.add_argument("--grid", help="comma-separated values, or a preset: default, wide (volatility)")
    _global_options(p, suppress=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("settle", help="replay claims along simulated price paths")
    _contract_options(p)
    p.add_argument("--n-paths", dest="n_paths", type=int)
    p.add_argument("--measure", choices=MEASURES, default="risk-neutral")
    p.add_argument("--schedule-out", dest="schedule_out", metavar="PATH",
                   help="also write the cash flows of the first path (.json or CSV)")
    _global_options(p, suppress=True)
    p.set_defaults(func=cmd_settle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}")
        return args.func(args, cfg)
    except ValidationError as exc:
        print(f"cloudcover {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
