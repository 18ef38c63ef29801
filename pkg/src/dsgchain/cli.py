"""
Command line driver: regime presets, pipeline orchestration and data files.

Example::

    dsgchain --preset subsreg --a 0.6 --out results/subsreg_a06

writes ``profile.csv``, ``energy.csv``, ``correlations_m0.csv``,
``entropy_vacuum.csv``, ``entropy_kink.csv`` and the two spectrum files.
"""

import argparse
from dataclasses import dataclass, field, replace
import json
import logging
from pathlib import Path
import sys

import numpy as np

from . import gaussian, spectral, statics
from .errors import (
    DegenerateCriticalPointError,
    DomainError,
    InstabilityError,
    NumericalDegeneracyError,
    SolverError,
)
from .potential import ModelParams
from .statics import FieldKind

log = logging.getLogger("dsgchain")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_SPECTRAL = 4
EXIT_IO = 5

PRESETS = {"subsreg": 1e4, "balreg": 1e5, "elasreg": 1e6}
PRESET_SITES = 501
OUTPUTS = ("profile", "energy", "correlations", "entropy-scan", "spectrum")
SECTORS = ("vacuum", "kink", "both")
FORMATS = ("csv", "json")
DEFAULT_SOFT_FLOOR = spectral.STABILITY_THRESHOLD


@dataclass(frozen=True)
class ExperimentSpec:
    params: ModelParams
    sector: str = "both"
    outputs: frozenset = frozenset(OUTPUTS)
    scan_stride: int = 1
    anchor_sites: tuple = (0,)
    output_format: str = "csv"
    output_path: Path = Path(".")
    soft_floor: float = DEFAULT_SOFT_FLOOR
    workers: int = 1

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise DomainError(f"unknown sector {self.sector!r}")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise DomainError(f"unknown outputs {sorted(unknown)}")
        if int(self.scan_stride) != self.scan_stride or self.scan_stride < 1:
            raise DomainError(f"scan stride must be a positive integer, got {self.scan_stride!r}")
        for m in self.anchor_sites:
            if not 0 <= m <= self.params.N:
                raise DomainError(f"anchor site {m} outside 0..{self.params.N}")
        if self.output_format not in FORMATS:
            raise DomainError(f"unknown format {self.output_format!r}")
        if self.soft_floor is not None and not self.soft_floor > 0:
            raise DomainError("soft floor must be positive")

    @property
    def sectors(self):
        if self.sector == "both":
            return (FieldKind.VACUUM, FieldKind.KINK)
        return (FieldKind(self.sector),)

    @property
    def scan_lengths(self):
        return list(range(1, self.params.n_sites + 1, self.scan_stride))


def preset(name, a):
    """Experiment for one of the three coupling regimes on the 501-site chain."""
    try:
        g = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return ExperimentSpec(params=ModelParams(PRESET_SITES, g, a))


def format_number(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _write_table(directory, stem, columns, fmt):
    directory = Path(directory)
    names = list(columns)
    data = [np.asarray(columns[c]) for c in names]
    if fmt == "csv":
        path = directory / f"{stem}.csv"
        lines = [",".join(names)]
        for row in zip(*data):
            lines.append(",".join(format_number(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        path = directory / f"{stem}.json"
        doc = {
            c: [json.loads(format_number(v)) for v in col] for c, col in zip(names, data)
        }
        text = json.dumps(doc, indent=1) + "\n"
    path.write_text(text)
    return path


@dataclass
class _Sector:
    config: object
    modes: object = None
    cov: object = None


def _compute(spec):
    """Run statics -> spectral -> gaussian for the requested sectors."""
    need_modes = bool({"correlations", "entropy-scan", "spectrum"} & set(spec.outputs))
    results = {}
    for kind in spec.sectors:
        config = statics.static_configuration(spec.params, kind)
        if kind is FieldKind.KINK:
            log.info("kink solved, residual %.2e", config.residual_norm())
        sector = _Sector(config)
        if need_modes:
            sector.modes = spectral.normal_modes(config, soft_floor=spec.soft_floor)
            if sector.modes.clamped:
                log.warning(
                    "%s: %d quasi-zero mode(s) clamped to omega^2=%g",
                    kind.value, len(sector.modes.clamped), spec.soft_floor,
                )
            sector.cov = gaussian.covariance(sector.modes)
        results[kind] = sector
    return results


def _emit(spec, results, written):
    out = Path(spec.output_path)
    fmt = spec.output_format
    sites = np.arange(spec.params.n_sites)
    # profile and energy describe the kink whenever it was computed
    shown = results.get(FieldKind.KINK) or results[FieldKind.VACUUM]

    def emit(stem, columns):
        written.append(_write_table(out, stem, columns, fmt))

    if "profile" in spec.outputs:
        emit("profile", {"site": sites, "phi": shown.config.phi.astype(float)})
    if "energy" in spec.outputs:
        emit("energy", {"site": sites, "energy": statics.energy_profile(shown.config).per_site})
    if "correlations" in spec.outputs:
        for m in spec.anchor_sites:
            columns = {"separation": np.arange(spec.params.n_sites - m)}
            for kind, sector in results.items():
                columns[f"xi_{kind.value}"] = gaussian.correlation_profile(sector.cov, m)
            emit(f"correlations_m{m}", columns)
    if "entropy-scan" in spec.outputs:
        for kind, sector in results.items():
            scan = gaussian.entropy_scan(sector.cov, spec.scan_lengths, workers=spec.workers)
            emit(f"entropy_{kind.value}", {"ell": scan.lengths, "entropy": scan.entropy})
    if "spectrum" in spec.outputs:
        for kind, sector in results.items():
            emit(
                f"spectrum_{kind.value}",
                {"mode": np.arange(sector.modes.size), "omega_squared": sector.modes.omega_squared},
            )


def run(spec):
    """Run the pipeline and write one file per requested output.

    Returns the list of written paths. On failure every file written by this
    call is removed before the exception propagates.
    """
    Path(spec.output_path).mkdir(parents=True, exist_ok=True)
    written = []
    try:
        _emit(spec, _compute(spec), written)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def build_parser():
    p = argparse.ArgumentParser(
        prog="dsgchain",
        description="Kink statics, normal modes and entanglement entropy scans "
        "for the double sine-Gordon Frenkel-Kontorova chain.",
    )
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--a", type=float, help="family parameter in [0, 1]")
    p.add_argument("--g", type=float, help="elastic coupling")
    p.add_argument("--sites", type=int, help="number of sites N+1 (default 501)")
    p.add_argument("--sector", choices=SECTORS)
    p.add_argument("--outputs", help="comma list from " + ",".join(OUTPUTS))
    p.add_argument("--stride", type=int, help="entropy scan stride")
    p.add_argument("--anchor", type=int, action="append", help="correlation anchor site (repeatable)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON file of flat key/value settings")
    p.add_argument(
        "--soft-floor", type=float,
        help=f"omega^2 assigned to unresolvable quasi-zero modes (default {DEFAULT_SOFT_FLOOR:g})",
    )
    p.add_argument("--strict", action="store_true", help="fail on quasi-zero modes instead of clamping")
    p.add_argument("--workers", type=int, help="threads for the entropy scan")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


# config-file key -> argparse dest
_CONFIG_KEYS = {
    "preset": "preset", "a": "a", "g": "g", "sites": "sites", "n_sites": "sites",
    "sector": "sector", "outputs": "outputs", "stride": "stride", "scan_stride": "stride",
    "anchor": "anchor", "anchor_sites": "anchor", "format": "format",
    "output_format": "format", "out": "out", "output_path": "out",
    "soft_floor": "soft_floor", "strict": "strict", "workers": "workers",
}


def _load_config(path):
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise DomainError("config file must hold a flat JSON object")
    settings = {}
    for key, value in doc.items():
        if key not in _CONFIG_KEYS:
            raise DomainError(f"unknown config key {key!r}")
        if isinstance(value, dict):
            raise DomainError(f"config key {key!r} must not be nested")
        settings[_CONFIG_KEYS[key]] = value
    return settings


def spec_from_args(args):
    settings = _load_config(args.config) if args.config else {}
    for dest in set(_CONFIG_KEYS.values()):
        value = getattr(args, dest, None)
        if value is not None and value is not False:
            settings[dest] = value

    outputs = settings.get("outputs")
    if isinstance(outputs, str):
        outputs = [s.strip() for s in outputs.split(",") if s.strip()]
    anchors = settings.get("anchor")
    if isinstance(anchors, int):
        anchors = [anchors]

    if "preset" in settings:
        if "a" not in settings:
            raise DomainError("--preset needs --a")
        spec = preset(settings["preset"], float(settings["a"]))
        params = spec.params
        if "g" in settings or "sites" in settings:
            params = ModelParams(
                int(settings.get("sites", params.n_sites)),
                float(settings.get("g", params.g)),
                params.a,
            )
    else:
        if "a" not in settings or "g" not in settings:
            raise DomainError("give --preset, or both --a and --g")
        params = ModelParams(
            int(settings.get("sites", PRESET_SITES)), float(settings["g"]), float(settings["a"])
        )
        spec = ExperimentSpec(params=params)

    soft_floor = None if settings.get("strict") else settings.get("soft_floor", spec.soft_floor)
    return replace(
        spec,
        params=params,
        sector=settings.get("sector", spec.sector),
        outputs=frozenset(outputs) if outputs is not None else spec.outputs,
        scan_stride=settings.get("stride", spec.scan_stride),
        anchor_sites=tuple(anchors) if anchors is not None else spec.anchor_sites,
        output_format=settings.get("format", spec.output_format),
        output_path=Path(settings.get("out", spec.output_path)),
        soft_floor=soft_floor,
        workers=int(settings.get("workers", spec.workers)),
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = spec_from_args(args)
    except (DomainError, ValueError, TypeError) as exc:
        print(f"dsgchain: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"dsgchain: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        written = run(spec)
    except SolverError as exc:
        print(f"dsgchain: solver failure: {exc} (residual {exc.residual:.3e})", file=sys.stderr)
        return EXIT_SOLVER
    except (InstabilityError, NumericalDegeneracyError) as exc:
        print(f"dsgchain: spectral instability: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except (DomainError, DegenerateCriticalPointError) as exc:
        print(f"dsgchain: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"dsgchain: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
