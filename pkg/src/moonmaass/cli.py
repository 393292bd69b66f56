"""Command-line front end: scanning, Weyl tables, consecutiveness, statistics.

Every artifact carries a short sha256 hash of the fields that determine its
payload, and commands that consume a previously written list refuse
artifacts whose hashes disagree instead of silently mixing runs.  All
randomness flows from the single ``--seed``.  Plot emission is data-only
(TSV/JSON); rendering is left to external tools.

Exit codes: 0 success; 2 configuration or input error; 3 computation
failure; 4 the run finished but carries a verification rejection (a scan
dip failed its checks, or the consecutiveness verdict is not "consistent").
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (ConfigMismatch, DomainError, MoonmaassError, RangeError,
                     UnsupportedGroup)
from .groups import GroupProfile, builtin_profile, load_profile
from .hejhal import scan
from .special import bessel_k_ir_grid, bessel_k_ir_oracle
from .stats import independence_demo, joint_histogram, ks_distance, spacings, unfold
from .turing import consecutiveness, inject, remove
from .weyl import EigenvalueList, load_list, main_term, save_list

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_REJECTED = 4

__all__ = ["RunConfig", "config_hash", "main",
           "EXIT_OK", "EXIT_CONFIG", "EXIT_COMPUTE", "EXIT_REJECTED"]


def _g(v: float) -> str:
    return "%.15g" % float(v)


@dataclass(frozen=True)
class RunConfig:
    """Flags of a scan run; the fields before ``out_dir`` determine the output."""

    group: int | None
    profile_path: str | None
    eps: float
    r_lo: float
    r_hi: float
    grid_step: float
    num_y: int
    seed: int
    out_dir: str = "."
    workers: int = 1

    def __post_init__(self):
        if (self.group is None) == (self.profile_path is None):
            raise DomainError("exactly one of group/profile must be given")
        if not 0 < self.eps < 1:
            raise DomainError(f"eps must lie in (0,1), got {self.eps}")
        if not 0 <= self.r_lo < self.r_hi:
            raise DomainError(f"bad r range [{self.r_lo}, {self.r_hi}]")
        if self.grid_step <= 0 or self.num_y < 1 or self.workers < 1:
            raise DomainError("grid_step, num_y, workers must be positive")


def config_hash(fields: dict, profile: GroupProfile | None = None) -> str:
    """Short digest of the payload-determining fields (plus the group data)."""
    payload = dict(fields)
    if profile is not None:
        payload["group_data"] = hashlib.sha256(
            profile.to_json().encode()).hexdigest()[:16]
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _resolve_profile(group: int | None, profile_path: str | None) -> GroupProfile:
    if profile_path:
        return load_profile(profile_path)
    return builtin_profile(group)


def _ensure_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _load_checked(path, expect_hash: str | None) -> EigenvalueList:
    """Load a list CSV, cross-checking its sidecar and any expected hash."""
    lst = load_list(path)
    sidecar = Path(path).with_suffix(".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        if meta.get("config_hash", "") != lst.config_hash:
            raise ConfigMismatch(
                f"{sidecar.name} carries hash {meta.get('config_hash')!r} but the "
                f"CSV says {lst.config_hash!r}; refusing mixed artifacts")
    if expect_hash and lst.config_hash != expect_hash:
        raise ConfigMismatch(
            f"list hash {lst.config_hash!r} != expected {expect_hash!r}")
    return lst


def _profile_for_list(lst: EigenvalueList, profile_path: str | None) -> GroupProfile:
    profile = _resolve_profile(None if profile_path else lst.N, profile_path)
    if profile.N != lst.N:
        raise ConfigMismatch(
            f"profile is for level {profile.N} but the list is for level {lst.N}")
    return profile


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_scan(args) -> int:
    config = RunConfig(group=args.group, profile_path=args.profile, eps=args.eps,
                       r_lo=args.r_lo, r_hi=args.r_hi, grid_step=args.grid_step,
                       num_y=args.num_y, seed=args.seed, out_dir=args.out_dir,
                       workers=args.workers)
    profile = _resolve_profile(config.group, config.profile_path)
    h = config_hash({"eps": config.eps, "r_lo": config.r_lo, "r_hi": config.r_hi,
                     "grid_step": config.grid_step, "num_y": config.num_y,
                     "seed": config.seed}, profile)
    out = _ensure_dir(config.out_dir)
    events = []
    with open(out / "scan_log.jsonl", "w", encoding="utf-8") as logf:
        def emit(record):
            record = {"config_hash": h, **record}
            logf.write(json.dumps(record, sort_keys=True) + "\n")
            events.append(record)

        candidates = scan(profile, config.r_lo, config.r_hi, config.eps,
                          grid_step=config.grid_step, num_y=config.num_y,
                          seed=config.seed, threshold=args.threshold,
                          workers=config.workers, log=emit)
    rejected = sum(1 for e in events
                   if e.get("event") == "candidate" and not e.get("accepted"))
    lst = EigenvalueList(N=profile.N, rs=tuple(c.r for c in candidates),
                         eps=config.eps, r_lo=config.r_lo, r_hi=config.r_hi,
                         config_hash=h, created=_now())
    save_list(lst, out / "eigenvalues.csv",
              sidecar={"grid_step": config.grid_step, "num_y": config.num_y,
                       "seed": config.seed, "rejected": rejected})
    for i, cand in enumerate(candidates, start=1):
        _write_coeffs(out / f"coeffs_{i:04d}.tsv", cand, h)
    for n, r, lam in lst.records:
        print(f"{n:4d}  r = {r:.10f}  lambda = {lam:.8f}")
    print(f"{len(lst)} eigenvalue(s) written to {out / 'eigenvalues.csv'}")
    if rejected:
        print(f"warning: {rejected} candidate(s) rejected by verification; "
              f"see scan_log.jsonl", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


def _write_coeffs(path: Path, cand, h: str) -> None:
    v = cand.verification
    lines = [
        f"# config_hash={h}",
        f"# r={_g(cand.r)}",
        f"# lambda={_g(cand.lam)}",
        f"# parity={'even' if cand.parity == 1 else 'odd'}",
        f"# sigma_min={_g(cand.sigma_min)}",
        f"# cond={_g(cand.cond)}",
        f"# reality_defect={_g(cand.reality_defect)}",
        f"# max_residual={_g(max(v.residuals))}",
        f"# hecke_defect={'none' if v.hecke_defect is None else _g(v.hecke_defect)}",
        f"# n_reliable={v.n_reliable}",
        "n\ta_n",
    ]
    for m, a in enumerate(cand.coeffs, start=1):
        lines.append(f"{m}\t{_g(a)}")
    path.write_text("\n".join(lines) + "\n")


_WEYL_COLUMNS = ("T", "quadratic", "tlogt", "linear", "elliptic_const",
                 "volume_const", "spectral_const", "sawtooth", "arctan_term",
                 "g_bound", "total")


def cmd_weyl(args) -> int:
    profile = _resolve_profile(args.group, args.profile)
    Ts = sorted(args.T)
    if any(t <= 1.0 for t in Ts):
        raise DomainError("the counting term requires T > 1")
    h = config_hash({"command": "weyl", "T": [_g(t) for t in Ts]}, profile)
    rows = [main_term(profile, t) for t in Ts]
    lines = [f"# config_hash={h}", f"# group={profile.N}", "\t".join(_WEYL_COLUMNS)]
    for terms in rows:
        lines.append("\t".join(_g(getattr(terms, c)) for c in _WEYL_COLUMNS))
    text = "\n".join(lines) + "\n"
    if args.out_dir:
        (_ensure_dir(args.out_dir) / "weyl_terms.tsv").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_turing(args) -> int:
    lst = _load_checked(args.list_path, args.expect_hash)
    profile = _profile_for_list(lst, args.profile)
    work, edit = lst, "none"
    if args.inject is not None:
        work, edit = inject(lst, args.inject), f"inject lambda={_g(args.inject)}"
    elif args.remove is not None:
        work, edit = remove(lst, args.remove), f"remove n={args.remove}"
    report = consecutiveness(work, profile, band_base=args.band_base,
                             points=args.points, debounce=args.debounce)
    h = config_hash({"command": "turing", "source": lst.config_hash, "edit": edit,
                     "band_base": args.band_base, "points": args.points,
                     "debounce": args.debounce}, profile)
    out = _ensure_dir(args.out_dir)
    doc = {"config_hash": h, "source_hash": lst.config_hash, "group": lst.N,
           "edit": edit, "count": len(work), "band_base": args.band_base,
           "verdict": report.verdict, "window": report.window,
           "drift_at_end": report.drift_at_end}
    (out / "turing.json").write_text(json.dumps(doc, indent=2) + "\n")
    lines = [f"# config_hash={h}", f"# source_hash={lst.config_hash}",
             f"# edit={edit}", "T\tavg_s\tband"]
    for T, v, b in zip(report.T_grid, report.avg_s, report.band):
        lines.append(f"{_g(T)}\t{_g(v)}\t{_g(b)}")
    (out / "turing.tsv").write_text("\n".join(lines) + "\n")
    msg = f"verdict: {report.verdict}"
    if report.window:
        msg += f"  (window [{report.window[0]:.3f}, {report.window[1]:.3f}])"
    print(msg)
    return EXIT_OK if report.verdict == "consistent" else EXIT_REJECTED


def cmd_stats(args) -> int:
    lst = _load_checked(args.list_path, args.expect_hash)
    profile = _profile_for_list(lst, args.profile)
    u = unfold(lst, profile)
    s = spacings(u)
    h = config_hash({"command": "stats", "source": lst.config_hash,
                     "bins": args.bins}, profile)
    out = _ensure_dir(args.out_dir)
    lines = [f"# config_hash={h}", f"# source_hash={lst.config_hash}",
             f"# count={s.size}", "n\tspacing"]
    for i, v in enumerate(s, start=1):
        lines.append(f"{i}\t{_g(v)}")
    (out / "spacings.tsv").write_text("\n".join(lines) + "\n")
    summary = {"config_hash": h, "source_hash": lst.config_hash, "group": lst.N,
               "count": int(s.size), "mean_spacing": float(s.mean()),
               "ks_poisson": ks_distance(s, "poisson"),
               "ks_goe": ks_distance(s, "goe")}
    summary["closer_to"] = ("poisson" if summary["ks_poisson"] < summary["ks_goe"]
                            else "goe")
    try:
        joint = joint_histogram(s, bins=args.bins)
        jlines = [f"# config_hash={h}", f"# source_hash={lst.config_hash}",
                  "# edges=" + ",".join(_g(e) for e in joint.edges),
                  "i\tj\tdensity"]
        for i, row in enumerate(joint.density):
            for j, d in enumerate(row):
                jlines.append(f"{i}\t{j}\t{_g(d)}")
        (out / "joint.tsv").write_text("\n".join(jlines) + "\n")
        summary["joint_bins"] = len(joint.edges) - 1
    except MoonmaassError as exc:
        summary["joint_bins"] = 0
        summary["joint_note"] = str(exc)
    (out / "ks.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"{s.size} spacings: KS(poisson) = {summary['ks_poisson']:.4f}, "
          f"KS(goe) = {summary['ks_goe']:.4f} -> closer to {summary['closer_to']}")
    return EXIT_OK


def cmd_demo_independence(args) -> int:
    rng = np.random.default_rng(args.seed)
    x = 0.6 + np.cumsum(rng.exponential(1.0, size=args.count))

    def m_mixed(lam):
        return 0.7 * lam + math.sqrt(lam + 1.0) - 1.0

    def m_quadratic(lam):
        return 0.05 * lam * lam + 1.3 * lam

    rep_a = independence_demo(x, m_mixed)
    rep_b = independence_demo(x, m_quadratic)
    identical = rep_a.spacings == rep_b.spacings
    h = config_hash({"command": "demo-independence", "count": args.count,
                     "seed": args.seed})
    doc = {"config_hash": h, "count": args.count, "seed": args.seed,
           "spacings_bit_identical": identical,
           "max_unfold_defect": max(rep_a.max_unfold_defect,
                                    rep_b.max_unfold_defect),
           "max_spacing_defect": max(rep_a.max_spacing_defect,
                                     rep_b.max_spacing_defect)}
    if args.out_dir:
        (_ensure_dir(args.out_dir) / "independence.json").write_text(
            json.dumps(doc, indent=2) + "\n")
    print(f"two unfolding functions, {args.count} levels: spacings bit-identical"
          f" = {identical}; numeric round-trip defect "
          f"<= {doc['max_unfold_defect']:.3g}")
    return EXIT_OK if identical else EXIT_COMPUTE


def cmd_bessel_table(args) -> int:
    if args.y_lo <= 0 or args.y_hi <= args.y_lo or args.count < 2:
        raise DomainError("need 0 < y_lo < y_hi and count >= 2")
    ys = np.geomspace(args.y_lo, args.y_hi, args.count)
    scaled = bessel_k_ir_grid(args.r, ys)
    pref = math.exp(-math.pi * abs(args.r) / 2)
    h = config_hash({"command": "bessel-table", "r": _g(args.r),
                     "y_lo": _g(args.y_lo), "y_hi": _g(args.y_hi),
                     "count": args.count, "oracle": not args.skip_oracle})
    header = "y\tscaled\tplain" if args.skip_oracle else \
        "y\tscaled\tplain\toracle_scaled\trel_err"
    lines = [f"# config_hash={h}", f"# r={_g(args.r)}", header]
    worst = 0.0
    for y, v in zip(ys, scaled):
        row = f"{_g(y)}\t{_g(v)}\t{_g(v * pref)}"
        if not args.skip_oracle:
            ref = bessel_k_ir_oracle(args.r, float(y), scaled=True)
            err = abs(v - ref) / abs(ref) if ref else abs(v)
            worst = max(worst, err)
            row += f"\t{_g(ref)}\t{err:.3e}"
        lines.append(row)
    text = "\n".join(lines) + "\n"
    if args.out_dir:
        (_ensure_dir(args.out_dir) / "bessel_table.tsv").write_text(text)
    sys.stdout.write(text)
    if not args.skip_oracle:
        print(f"# worst relative error vs oracle: {worst:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _add_group_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--group", type=int, help="built-in level (1, 5, or 6)")
    g.add_argument("--profile", help="path to a group profile JSON")


def _add_list_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("list_path", help="eigenvalue CSV written by scan")
    p.add_argument("--profile", help="group profile JSON (default: built-in "
                                     "profile for the list's level)")
    p.add_argument("--expect-hash", help="refuse the list unless its config "
                                         "hash matches this value")
    p.add_argument("--out-dir", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moonmaass",
        description="Maass cusp form computation on moonshine groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="search an r window and verify candidates")
    _add_group_args(p)
    p.add_argument("--r-lo", type=float, default=0.0)
    p.add_argument("--r-hi", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--num-y", type=int, default=5)
    p.add_argument("--threshold", type=float, default=None,
                   help="dip threshold (default: auto from the scan itself)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("weyl", help="tabulate the counting-term breakdown")
    _add_group_args(p)
    p.add_argument("--T", type=float, action="append", required=True,
                   help="evaluation point, repeatable; requires T > 1")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("turing", help="consecutiveness verdict for a list")
    _add_list_args(p)
    edit = p.add_mutually_exclusive_group()
    edit.add_argument("--inject", type=float, metavar="LAMBDA",
                      help="insert a fake eigenvalue before testing")
    edit.add_argument("--remove", type=int, metavar="N",
                      help="drop the N-th eigenvalue before testing")
    p.add_argument("--band-base", type=float, default=0.15)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--debounce", type=int, default=10)
    p.set_defaults(func=cmd_turing)

    p = sub.add_parser("stats", help="unfold a list and emit spacing data")
    _add_list_args(p)
    p.add_argument("--bins", type=int, default=None,
                   help="joint-grid bin count (default: auto)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("demo-independence",
                       help="show spacings are independent of the unfolding map")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_demo_independence)

    p = sub.add_parser("bessel-table", help="dump K-Bessel values vs the oracle")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--y-lo", type=float, default=1e-2)
    p.add_argument("--y-hi", type=float, default=1e2)
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--skip-oracle", action="store_true",
                   help="omit the slow arbitrary-precision reference column")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_bessel_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigMismatch, UnsupportedGroup, DomainError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MoonmaassError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except np.linalg.LinAlgError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
