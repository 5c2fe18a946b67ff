"""
Experiment runner behind the command line.

Builds the domain objects from an :class:`ExperimentConfig`, runs one
experiment and writes its tables (CSV), diagnostics (JSON), the resolved
configuration echo and a run manifest into the output directory.
"""
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, Optional
import csv
import time
from .conf import WPROBE_THREADS, logging
from .correlators import (
    AbstractCorrelator,
    CorrelatorSpec,
    FieldState,
    StateKind,
    closed_form_pullback,
    mode_integral_correlator,
    single_mode_correlator
)
from .delta_limit import (
    EtaSchedule,
    EtaSweep,
    ScalingReport,
    eta_sweep,
    nonlocal_delta_limit,
    scaling_experiment
)
from .exceptions import ConfigError, NumericalError, WProbeException
from .libs.json import dump_json
from .models import ExperimentConfig, RunManifest
from .protocol import ProtocolConfig, ReconstructionResult, reconstruction_sweep
from .response import (
    Detector,
    ProbeOutcome,
    QuadratureOptions,
    excitation_probability,
    local_term
)
from .switching import Comb, NascentDelta, ToothShape
from .trajectories import Worldline, WorldlineKind
from .version import __version__


COMMANDS = ("respond", "reconstruct", "scaling", "sweep")

RESPOND_COLUMNS = ("n", "local_term", "p_total", "re_c", "im_c", "err_est", "flag")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


class ExperimentRunner:
    """Runs one subcommand against a resolved configuration."""

    def __init__(
        self,
        config: ExperimentConfig,
        out: Optional[str] = None,
        threads: Optional[int] = None,
        seed: Optional[int] = None
    ):
        self.config = config
        self.output = Path(out or config.output.directory)
        self.stem = config.output.stem
        self.threads = threads or WPROBE_THREADS
        # reserved: nothing in the library is stochastic yet.
        self.seed = seed
        self.outputs: list[str] = []
        self.errors: dict[str, str] = {}
        self.logger = logging.getLogger("WProbe.Runner")

    ## domain objects
    def options(self) -> QuadratureOptions:
        q = self.config.quadrature
        return QuadratureOptions(
            rtol=q.tol,
            max_depth=q.max_depth,
            order=q.order,
            tail_tol=q.tail_tol,
            workers=self.threads,
            method=q.method
        )

    def detector(self) -> Detector:
        return Detector(gap=self.config.detector.gap, coupling=self.config.detector.coupling)

    def shape(self) -> ToothShape:
        return ToothShape(self.config.comb.shape, self.config.comb.sharpness)

    def comb(self) -> Comb:
        c = self.config.comb
        return Comb(NascentDelta(self.shape(), c.eta), start=c.tau0, lapse=c.zeta, teeth=c.teeth)

    def worldline(self) -> Worldline:
        t = self.config.trajectory
        dim = self.config.field.dim
        if t.kind == WorldlineKind.UNIFORMLY_ACCELERATED.value:
            return Worldline.accelerated(t.a, dimension=dim)
        return Worldline(t.kind, dim, velocity=t.v)

    def state(self) -> FieldState:
        s = self.config.state
        return FieldState(s.kind, beta=s.beta, omega=s.omega, occupation=s.n)

    def correlator_spec(self) -> CorrelatorSpec:
        f = self.config.field
        return CorrelatorSpec(
            mass=f.mass,
            dimension=f.dim,
            state=self.state(),
            trajectory=self.worldline(),
            epsilon=self.config.regulator.epsilon,
            normalization=f.normalization,
            ir_cutoff=f.ir_cutoff,
            thermal_images=self.config.regulator.images
        )

    def build_correlator(self) -> AbstractCorrelator:
        spec = self.correlator_spec()
        model = self.config.field.model
        if spec.state.kind is StateKind.SINGLE_MODE:
            return single_mode_correlator(spec.state.omega, spec.state.occupation)
        if model == "closed_form":
            return closed_form_pullback(spec)
        if model == "mode_integral":
            return mode_integral_correlator(spec)
        if model != "auto":
            raise ConfigError(
                f"field.model must be auto, closed_form or mode_integral, got {model!r}",
                key="field.model"
            )
        if spec.mass == 0 and spec.dimension == 3:
            return closed_form_pullback(spec)
        return mode_integral_correlator(spec)

    ## output
    def _path(self, suffix: str) -> Path:
        return self.output.joinpath(f"{self.stem}_{suffix}")

    def _register(self, path: Path) -> Path:
        self.outputs.append(path.name)
        self.logger.info(f"wrote {path}")
        return path

    def write_csv(self, suffix: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = self._path(suffix)
        with path.open("w", newline="") as fp:
            writer = csv.writer(fp, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        return self._register(path)

    def write_json(self, suffix: str, obj: Any) -> Path:
        return self._register(dump_json(obj, self._path(suffix)))

    ## subcommands
    def run_respond(self) -> ProbeOutcome:
        comb, det, corr = self.comb(), self.detector(), self.build_correlator()
        options = self.options()
        try:
            outcome = excitation_probability(comb, det, corr, options)
        except NumericalError as err:
            self.errors["respond"] = str(err)
            rows = []
            for n in range(comb.teeth):
                try:
                    rows.append((n, local_term(n, comb, det, corr, options), None, None, None, None, ""))
                except NumericalError as row_err:
                    rows.append((n, None, None, None, None, None, f"failed: {row_err}"))
            rows.append(("summary", None, None, None, None, None, f"failed: {err}"))
            self.write_csv("respond.csv", RESPOND_COLUMNS, rows)
            raise
        rows = [(n, term, None, None, None, None, "") for n, term in enumerate(outcome.local_terms)]
        rows.append((
            "summary",
            None,
            outcome.total,
            outcome.nonlocal_c.real,
            outcome.nonlocal_c.imag,
            outcome.error,
            ""
        ))
        self.write_csv("respond.csv", RESPOND_COLUMNS, rows)
        self.write_json("respond.json", outcome)
        return outcome

    def run_reconstruct(self) -> ReconstructionResult:
        if not self.config.has("protocol"):
            raise ConfigError("reconstruct needs a 'protocol' section", key="protocol")
        p = self.config.protocol
        if not p.zeta_grid:
            raise ConfigError("protocol.zeta_grid is empty", key="protocol.zeta_grid")
        grid = [float(z) for z in p.zeta_grid]
        cfg = ProtocolConfig(
            lapse=grid[0],
            start=p.tau0,
            eta_fractions=tuple(p.eta_fractions),
            k_even=p.k_even,
            k_quarter=p.k_quarter,
            coupling=self.config.detector.coupling,
            route=p.route,
            shape=self.shape()
        )
        result = reconstruction_sweep(grid, cfg, self.build_correlator(), self.options())
        self._register(result.to_csv(self._path("reconstruct.csv")))
        self.write_json("reconstruct.json", result)
        for entry in result.failed:
            self.errors[f"zeta={entry.zeta!r}"] = entry.failure
        if len(result.failed) == len(result.entries):
            raise NumericalError(f"reconstruction failed at every ζ in {grid}")
        return result

    def run_scaling(self) -> list[ScalingReport]:
        if not self.config.has("scaling"):
            raise ConfigError("scaling needs a 'scaling' section", key="scaling")
        s = self.config.scaling
        schedule = EtaSchedule.spanning(s.eta_max, s.eta_min, s.points)
        reports = [
            scaling_experiment(
                int(d),
                self.shape(),
                self.detector(),
                schedule,
                mass=self.config.field.mass,
                normalization=s.normalization,
                options=self.options()
            )
            for d in s.dims
        ]
        self.write_csv(
            "scaling.csv",
            ("dim", "eta", "p_over_lambda2"),
            [(r.dimension, eta, p) for r in reports for eta, p in zip(r.etas, r.probabilities)]
        )
        self.write_json("scaling.json", {"reports": reports})
        for report in reports:
            if report.inconclusive:
                self.errors[f"d={report.dimension}"] = "inconclusive fit"
        return reports

    def run_sweep(self) -> EtaSweep:
        comb, det, corr = self.comb(), self.detector(), self.build_correlator()
        sweep = self.config.sweep
        schedule = EtaSchedule(tuple(sweep.etas), sweep.extrapolation_order)
        try:
            reference = nonlocal_delta_limit(comb.teeth, comb.lapse, comb.start, det.gap, corr)
        except WProbeException as err:
            self.logger.warning(f"no delta-limit reference: {err}")
            reference = None
        result = eta_sweep(comb, det, corr, schedule, self.options(), reference=reference)
        self.write_csv("sweep.csv", ("eta", "re_c", "im_c"), result.rows())
        self.write_json("sweep.json", result)
        if not result.monotone:
            self.errors["sweep"] = "non-monotone error sequence"
        return result

    def run(self, command: str) -> RunManifest:
        if command not in COMMANDS:
            raise ConfigError(f"Unknown command {command!r}, expected one of {COMMANDS}")
        self.output.mkdir(parents=True, exist_ok=True)
        self.write_json("config.json", self.config.resolved())
        started = time.perf_counter()
        self.logger.info(f"running {command} into {self.output}")
        try:
            getattr(self, f"run_{command}")()
        except WProbeException as err:
            self.errors.setdefault(command, str(err))
            raise
        finally:
            manifest = RunManifest(
                command=command,
                version=__version__,
                config=self.config.resolved(),
                duration=time.perf_counter() - started,
                outputs=list(self.outputs) + [self._path("manifest.json").name],
                errors=dict(self.errors)
            )
            dump_json(manifest.snapshot(), self._path("manifest.json"))
        return manifest
