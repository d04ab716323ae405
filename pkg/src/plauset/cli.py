"""Command-line front end: ``plauset run <config>`` and ``plauset domains``.

The config file is flat ``key = value`` text, for example::

    domain = riverswim
    agents = psrl, ofvf, bayesucrl
    episodes = 100
    runs = 100
    delta = 0.05
    domain.p_right = 0.35
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .agents import AgentSpec, BAYES_UCRL, OFVF, PSRL
from .domains import DomainSpec, describe_domains
from .harness import run_experiment

RECORD_COLUMNS = ("agent", "run", "episode", "episodic_regret", "cumulative_regret",
                  "predicted_return", "realized_return")
SUMMARY_COLUMNS = ("agent", "episode", "mean_cumulative", "worst_cumulative")
PLOT_FILES = {"mean": "average_case.svg", "worst": "worst_case.svg"}

DEFAULT_AGENTS = (PSRL, OFVF, BAYES_UCRL)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    domain: DomainSpec
    agents: tuple = ()
    episodes: int = 100
    runs: int = 100
    horizon: int | None = None
    delta: float = 0.05
    posterior_samples: int = 1000
    seed: int = 0
    output_dir: str = "results"
    emit_plots: bool = True
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta out of (0,1)")
        if self.episodes < 1:
            raise ConfigError("episodes must be >= 1")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.horizon is not None and self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.posterior_samples < 1:
            raise ConfigError("posterior_samples must be >= 1")
        if not self.agents:
            raise ConfigError("no agents configured")

    def agent_specs(self) -> list[AgentSpec]:
        return [AgentSpec(k, delta=self.delta, posterior_samples=self.posterior_samples)
                for k in self.agents]


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


_FIELDS = {
    "domain": str,
    "agents": _list,
    "episodes": int,
    "runs": int,
    "horizon": int,
    "delta": float,
    "posterior_samples": int,
    "seed": int,
    "output_dir": str,
    "emit_plots": _bool,
}
_ALIASES = {"L": "episodes", "N": "posterior_samples", "plots": "emit_plots"}


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    values = {}
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"{source}:{lineno}: empty key or value")
        try:
            if key.startswith("domain."):
                name = key[len("domain."):]
                if name in overrides:
                    raise ConfigError(f"duplicate key {key!r}")
                overrides[name] = tuple(_number(v) for v in _list(value)) if "," in value else _number(value)
                continue
            key = _ALIASES.get(key, key)
            if key not in _FIELDS:
                raise ConfigError(f"unknown key {key!r}")
            if key in values:
                raise ConfigError(f"duplicate key {key!r}")
            values[key] = _FIELDS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None

    if "domain" not in values:
        raise ConfigError(f"{source}: missing required key 'domain'")
    if "horizon" in values:
        overrides["horizon"] = values["horizon"]
    try:
        domain = DomainSpec(values.pop("domain"), overrides)
        agents = tuple(AgentSpec(k).kind for k in values.pop("agents", DEFAULT_AGENTS))
        if len(set(agents)) != len(agents):
            raise ConfigError("agents listed more than once")
        return ExperimentConfig(domain=domain, agents=agents, overrides=overrides, **values)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config_text(text, str(path))


# --------------------------------------------------------------------------
# output


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_records(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([r.agent, r.run, r.episode, _fmt(r.episodic_regret), _fmt(r.cumulative_regret),
                        _fmt(r.predicted_return), _fmt(r.realized_return)])


def write_summary(path, curves):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for name, curve in curves.items():
            for l, (m, worst) in enumerate(zip(curve.mean_cumulative, curve.worst_cumulative), start=1):
                w.writerow([name, l, _fmt(m), _fmt(worst)])


_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def svg_chart(series: dict, title: str, xlabel: str = "episode",
              ylabel: str = "cumulative regret", width: int = 480, height: int = 320) -> str:
    """Line chart of named y-sequences against 1..n as standalone SVG text."""
    left, right, top, bottom = 64, 16, 32, 48
    pw, ph = width - left - right, height - top - bottom
    n = max(len(y) for y in series.values())
    ymax = max(float(np.max(y)) for y in series.values())
    ymax = ymax if ymax > 0 else 1.0

    def xy(i, y):
        x = left + (pw * (i / (n - 1)) if n > 1 else pw / 2)
        return x, top + ph * (1.0 - y / ymax)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
           f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
           f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>']
    for frac in (0.0, 0.5, 1.0):
        _, y = xy(0, frac * ymax)
        out.append(f'<text x="{left - 4}" y="{y + 4:.1f}" text-anchor="end" font-size="10">{frac * ymax:.3g}</text>')
    for i in sorted({0, n - 1}):
        x, _ = xy(i, 0.0)
        out.append(f'<text x="{x:.1f}" y="{top + ph + 14}" text-anchor="middle" font-size="10">{i + 1}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 14 {top + ph / 2:.1f})">{escape(ylabel)}</text>')
    for k, (name, ys) in enumerate(series.items()):
        colour = _COLOURS[k % len(_COLOURS)]
        pts = " ".join("{:.2f},{:.2f}".format(*xy(i, float(y))) for i, y in enumerate(ys))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 12 + 14 * k
        out.append(f'<line x1="{left + 8}" y1="{ly}" x2="{left + 24}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + 28}" y="{ly + 4}" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_plots(output_dir, curves, domain_name: str):
    mean = {name: c.mean_cumulative for name, c in curves.items()}
    worst = {name: c.worst_cumulative for name, c in curves.items()}
    paths = []
    for key, series, label in (("mean", mean, "average case"), ("worst", worst, "worst case")):
        path = Path(output_dir) / PLOT_FILES[key]
        path.write_text(svg_chart(series, f"{domain_name}: {label}"))
        paths.append(path)
    return paths


def run(config: ExperimentConfig) -> int:
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc.strerror or exc}") from None
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    result = run_experiment(config.domain, config.agent_specs(), episodes=config.episodes,
                            runs=config.runs, seed=config.seed)
    write_records(out / "records.csv", result.records)
    write_summary(out / "summary.csv", result.curves)
    if config.emit_plots:
        write_plots(out, result.curves, config.domain.name)
    return 0


def list_domains() -> str:
    return describe_domains()


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plauset", description="Tabular exploration experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the experiment described by a config file")
    r.add_argument("config")
    r.add_argument("--output-dir")
    r.add_argument("--seed", type=int)
    r.add_argument("--no-plots", action="store_true")
    sub.add_parser("domains", help="list the benchmark domains and their default parameters")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "domains":
        print(list_domains())
        return 0
    try:
        config = parse_config(args.config)
        changes = {}
        if args.output_dir is not None:
            changes["output_dir"] = args.output_dir
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.no_plots:
            changes["emit_plots"] = False
        return run(replace(config, **changes))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"plauset: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
