"""Command line front end.

    cogrowth run --presentation z2 --alpha 1 --beta-min 0.05 --beta-max 0.3 --beta-count 6 \\
        --steps 1e7 --overlay z2 --out runs/z2
    cogrowth verify
    cogrowth series k3 --order 40 --out k3.csv
    cogrowth count z2 --length 12
"""
from __future__ import annotations

import argparse
import functools
import logging
import sys
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import __version__
from .bruteforce import count_trivial_words, oracle_for, write_counts_csv
from .plotting import render, write_plot_script
from .presentation import Presentation, PresentationError, load_presentation
from .report import write_blocks_csv, write_exact_csv, write_results_csv
from .series import (
    PUBLISHED_RADII,
    SeriesTruncationError,
    converged_expected_length,
    kouksov_series,
    woess_transform,
    write_series_csv,
    z2_return_series,
)
from .tempering import ConfigError, TemperingConfig, linear_grid, parse_betas, run_grid

log = logging.getLogger("cogrowth")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_VERIFY = 0, 1, 2, 3
OVERLAYS = ("none", "z2", "k1", "k2", "k3")


@dataclass
class RunConfig:
    presentation: str = "z2"
    alpha: float = 1.0
    pc: float = 0.5
    betas: list[float] | None = None
    beta_min: float = 0.05
    beta_max: float = 0.30
    beta_count: int = 20
    steps: int = 10**7
    swap_interval: int = 100
    blocks: int = 100
    seed: int = 0
    out: str = "cogrowth-run"
    overlay: str = "none"
    allow_empty: bool = False
    burn_in: int = 0
    workers: int = 1
    plot: bool = True

    def beta_grid(self) -> list[float]:
        if self.betas:
            return list(self.betas)
        return linear_grid(self.beta_min, self.beta_max, self.beta_count)

    def tempering(self) -> TemperingConfig:
        return TemperingConfig(
            betas=tuple(self.beta_grid()), alpha=self.alpha, steps_per_chain=self.steps, p_c=self.pc,
            swap_interval=self.swap_interval, seed=self.seed, block_count=self.blocks,
            avoid_empty=not self.allow_empty, burn_in=self.burn_in, workers=self.workers,
        )


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _coerce(name: str, raw):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    if name not in kinds:
        raise ConfigError(f"unknown config key {name!r}")
    kind = kinds[name]
    try:
        if name == "betas":
            return parse_betas(raw) if raw not in (None, "") else None
        if kind == "bool":
            if isinstance(raw, bool):
                return raw
            return _BOOL[str(raw).strip().lower()]
        if kind == "int":
            return int(float(raw)) if isinstance(raw, str) and ("e" in raw.lower() or "." in raw) else int(raw)
        if kind == "float":
            return float(raw)
        return str(raw)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value {raw!r} for {name}") from exc


def read_config_file(path: str | Path) -> dict:
    """key = value lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key = key.strip().replace("-", "_")
        out[key] = _coerce(key, val.strip())
    return out


def build_config(overrides: dict, config_file: str | None = None) -> RunConfig:
    cfg = RunConfig()
    if config_file:
        cfg = replace(cfg, **read_config_file(config_file))
    cfg = replace(cfg, **{k: _coerce(k, v) for k, v in overrides.items() if v is not None})
    if cfg.overlay not in OVERLAYS:
        raise ConfigError(f"overlay must be one of {OVERLAYS}")
    return cfg


@functools.lru_cache(maxsize=None)
def _exact_series(name: str, order: int):
    if name == "z2":
        return woess_transform(z2_return_series(order), 2, order)
    return kouksov_series(name.upper(), order)


def exact_series_factory(name: str):
    return functools.partial(_exact_series, name)


def check_overlay(name: str, p: Presentation) -> None:
    """An overlay is only meaningful when the presentation defines that group."""
    oracle = oracle_for(name)
    try:
        oracle.check(p)
    except ValueError as exc:
        raise ConfigError(f"overlay {name!r} does not match presentation {p.name!r}: {exc}") from exc


def exact_curve(name: str, alpha: float, lo: float, hi: float, exclude_empty: bool,
                points: int = 120, max_order: int = 640) -> list[tuple[float, float]]:
    make = exact_series_factory(name)
    hi = min(hi, PUBLISHED_RADII[name])
    out = []
    for i in range(points):
        b = lo + (hi - lo) * i / (points - 1)
        try:
            e, _ = converged_expected_length(make, alpha, b, exclude_empty, max_order=max_order)
        except SeriesTruncationError:
            break
        out.append((b, e))
    return out


def markers_for(p: Presentation, overlay: str) -> list[tuple[float, str]]:
    k = p.gen_count
    marks = [(1.0 / (2 * k - 1), f"1/{2 * k - 1}")]
    key = overlay if overlay != "none" else p.name
    radius = PUBLISHED_RADII.get(key)
    if radius is not None and abs(radius - marks[0][0]) > 1e-12:
        marks.append((radius, f"beta_c={radius:.10g}"))
    return marks


def run(cfg: RunConfig, progress=None) -> dict[str, Path]:
    """Run the tempering grid and write results, block means, exact curve and plots."""
    try:
        p = load_presentation(cfg.presentation)
    except (OSError, PresentationError) as exc:
        raise ConfigError(str(exc)) from exc
    tcfg = cfg.tempering()
    if cfg.overlay != "none":
        check_overlay(cfg.overlay, p)
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from exc
    t0 = time.perf_counter()
    reports = run_grid(tcfg, p, progress)
    log.info("sampled %d betas x %d steps in %.1f s", len(tcfg.betas), tcfg.steps_per_chain,
             time.perf_counter() - t0)
    meta = {
        "presentation": p.name or cfg.presentation,
        "presentation_sha256": p.digest(),
        "generators": " ".join(p.generator_names),
        "relators": ", ".join(p.format(r) for r in p.relators),
        "seed": cfg.seed,
        "alpha": cfg.alpha,
        "p_c": cfg.pc,
        "steps": cfg.steps,
        "burn_in": cfg.burn_in,
        "swap_interval": cfg.swap_interval,
        "blocks": cfg.blocks,
        "avoid_empty": not cfg.allow_empty,
    }
    paths = {"results": out / "results.csv", "blocks": out / "blocks.csv"}
    write_results_csv(reports, paths["results"], meta)
    write_blocks_csv(reports, paths["blocks"], meta)
    if cfg.overlay != "none":
        betas = tcfg.betas
        curve = exact_curve(cfg.overlay, cfg.alpha, min(betas), max(betas), not cfg.allow_empty)
        paths["exact"] = out / "exact.csv"
        write_exact_csv(curve, paths["exact"], {**meta, "overlay": cfg.overlay})
    paths["plot_script"] = write_plot_script(out, p.name or cfg.presentation, cfg.alpha,
                                             markers_for(p, cfg.overlay))
    if cfg.plot:
        for f in render(paths["plot_script"]):
            paths[f.stem] = f
    return paths


def _add_run_args(ap: argparse.ArgumentParser):
    ap.add_argument("--config", help="key=value file; flags override it")
    ap.add_argument("--presentation", help="presentation file or bundled name")
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--pc", type=float, help="conjugation probability")
    ap.add_argument("--betas", help="comma separated beta list")
    ap.add_argument("--beta-min", type=float)
    ap.add_argument("--beta-max", type=float)
    ap.add_argument("--beta-count", type=int)
    ap.add_argument("--steps", type=lambda s: int(float(s)), help="moves per beta (after burn-in)")
    ap.add_argument("--burn-in", type=lambda s: int(float(s)))
    ap.add_argument("--swap-interval", type=int)
    ap.add_argument("--blocks", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    ap.add_argument("--overlay", choices=OVERLAYS)
    ap.add_argument("--allow-empty", action="store_const", const=True,
                    help="sample all trivial words, including the empty word")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--no-plot", dest="plot", action="store_const", const=False,
                    help="write the plot script without rendering it")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cogrowth", description=__doc__.splitlines()[0] or None)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="sample a beta grid and write reports")
    _add_run_args(p_run)

    p_ver = sub.add_parser("verify", help="run the acceptance checks")
    p_ver.add_argument("--only", help="comma separated check numbers, e.g. 1,2,4")
    p_ver.add_argument("--skip-sampling", action="store_true",
                       help="skip the long Monte Carlo checks (6-9)")

    p_ser = sub.add_parser("series", help="export an exact cogrowth series as CSV")
    p_ser.add_argument("name", choices=OVERLAYS[1:])
    p_ser.add_argument("--order", type=int, default=60)
    p_ser.add_argument("--out", default="-")

    p_cnt = sub.add_parser("count", help="brute-force c(n) for a presentation with an oracle")
    p_cnt.add_argument("name", help="bundled name: z2, k1, k2, k3, bs12, bs13")
    p_cnt.add_argument("--length", type=int, default=10)
    p_cnt.add_argument("--out", default="-")

    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            keys = [f.name for f in fields(RunConfig)]
            overrides = {k: getattr(args, k) for k in keys if hasattr(args, k)}
            cfg = build_config(overrides, args.config)
            paths = run(cfg)
            for k, v in paths.items():
                print(f"{k}: {v}")
            return EXIT_OK
        if args.command == "verify":
            from .verify import run_checks

            only = {int(x) for x in args.only.split(",")} if args.only else None
            results = run_checks(only=only, skip_sampling=args.skip_sampling, echo=print)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
        if args.command == "series":
            s = _exact_series(args.name, args.order)
            _emit(lambda path: write_series_csv(s, path), args.out)
            return EXIT_OK
        if args.command == "count":
            oracle = oracle_for(args.name)
            if oracle is None:
                raise ConfigError(f"no word-problem oracle for {args.name!r}")
            counts = count_trivial_words(load_presentation(args.name), oracle, args.length)
            _emit(lambda path: write_counts_csv(counts, path), args.out)
            return EXIT_OK
    except (ConfigError, PresentationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - mapped to the runtime exit code
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_CONFIG


def _emit(write, out: str):
    if out == "-":
        import tempfile

        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "out.csv"
            write(path)
            sys.stdout.write(path.read_text())
    else:
        write(out)


if __name__ == "__main__":
    sys.exit(main())
