# experiments/runners.py
"""One function per subcommand: validated ExperimentConfig in, Report out."""
import logging

from django.conf import settings

from coulombgas.enumeration import exact_partition
from coulombgas.sampler import kt_inputs_for_gas, run_chains
from hypercube.integrals import error_rates
from hypercube.models import PulseSequence
from probability.scaling import fit_scan, scaling_scan
from rg.classification import classify, pulses_needed
from rg.flows import integrate_beta, kt_flow
from rg.models import Verdict
from stabilizer.codes import steane_code
from stabilizer.concatenation import concatenation_map, levels_needed
from stabilizer.montecarlo import logical_error_rate, threshold_sweep
from utils.exceptions import RelevantFlowError
from .models import Report

logger = logging.getLogger(__name__)


class MissingSectionError(ValueError):
    def __init__(self, subcommand, section):
        super().__init__(f"'{subcommand}' needs the '{section}' config section")
        self.section = section


def _require(config, subcommand, *sections):
    for section in sections:
        if getattr(config, section) is None:
            raise MissingSectionError(subcommand, section)


def _pulses(config):
    return config.pulses or PulseSequence()


def run_classify(config, seed=None):
    _require(config, 'classify', 'noise')
    model, D = config.noise, config.comp_dim
    n_pulses = _pulses(config).n_pulses
    results = classify(model, D, n_pulses=n_pulses)
    report = Report(header=['channel', 'verdict', 'exponent', 'pulses_needed'])
    for channel, result in results.items():
        needed = pulses_needed(D, model.bath.z, model.bath.delta[channel])
        report.rows.append([channel, result.verdict.value, result.exponent, needed])
        report.lines.append(f"{channel}: {result}, pulses_needed = {'none' if needed is None else needed}")
    report.summary = {'D': D, 'z': model.bath.z, 'n_pulses': n_pulses}
    return report


def run_flow(config, seed=None):
    rg = config.rg
    if config.kt is not None and config.noise is None:
        kt = config.kt
        trajectory = kt_flow(kt['x0'], kt['y0'], ell_max=kt['ell_max'], step=kt['step'])
        logger.info(f"✓ KT flow from ({kt['x0']:g}, {kt['y0']:g}): {trajectory.phase.value}")
        return Report(
            header=trajectory.header(), rows=trajectory.rows(),
            summary={'phase': trajectory.phase.value, 'invariant': float(trajectory.invariant[0])},
        )
    _require(config, 'flow', 'noise')
    model = config.noise
    trajectory = integrate_beta(
        model.coupling_vector(), model.g_matrix(), model.h_matrix(),
        ell_max=rg['ell_max'], step=rg['step'],
    )
    logger.info(f"✓ Flow integrated to ell = {trajectory.ell[-1]:g} (diverged: {trajectory.diverged})")
    return Report(
        header=trajectory.header(), rows=trajectory.rows(),
        summary={'diverged': trajectory.diverged, 'ell_end': float(trajectory.ell[-1])},
    )


def run_epsilon(config, seed=None):
    _require(config, 'epsilon', 'noise', 'grid')
    rates = error_rates(config.noise, config.grid, _pulses(config))
    report = Report(header=['channel', 'lambda_star', 'eps'], summary=rates.as_dict())
    for channel, eps in rates.eps.items():
        report.rows.append([channel, rates.lambda_star.get(channel), eps])
        report.lines.append(f"eps_{channel} = {eps:.6g} (lambda* = {rates.lambda_star.get(channel, 0.0):.6g})")
    report.lines.append(f"total = {rates.total:.6g}")
    return report


def run_scaling_scan(config, seed=None):
    _require(config, 'scaling-scan', 'noise')
    scan = config.scan
    workers = scan['workers'] or settings.RESILIENCE['WORKERS']
    rows = scaling_scan(config.noise.bath, scan['channel'], config.comp_dim, scan['sizes'], workers=workers)
    fit = fit_scan(rows, tolerance=scan['tolerance'])
    return Report(
        header=['L', 'sum', 'ratio'],
        rows=[[row.L, row.sum, row.ratio] for row in rows],
        summary={
            'fit': fit.as_dict(), 'channel': scan['channel'], 'D': config.comp_dim,
            'excess': {str(row.L): row.excess for row in rows},
        },
    )


def run_coulomb(config, seed=None):
    _require(config, 'coulomb', 'coulomb')
    spec, section = config.lattice, config.coulomb
    trace = []
    observables = run_chains(
        spec, config.mc['sweeps'], seed, chains=section['chains'],
        max_pairs=section['max_pairs'], trace=trace,
    )
    summary = observables.as_dict()
    x, y = kt_inputs_for_gas(spec)
    summary['kt_phase'] = kt_flow(x, y, ell_max=100.0, step=0.01).phase.value
    if section['exact']:
        summary['exact'] = exact_partition(spec, max_pairs=section['max_pairs']).as_dict()
    return Report(header=['sweep', 'pairs', 'r2'], rows=trace, summary=summary)


def _sweep(config, seed):
    threshold = config.threshold
    return threshold_sweep(
        steane_code(), threshold['p_values'], config.mc['samples'], seed,
        chunk_size=threshold['chunk_size'],
    )


def run_threshold(config, seed=None):
    sweep = _sweep(config, seed)
    return Report(header=sweep.header(), rows=sweep.rows(), summary=sweep.summary())


def run_pipeline(config, seed=None):
    """classify → λ* → ε → threshold sweep → concatenation."""
    _require(config, 'pipeline', 'noise', 'grid')
    model, pulses = config.noise, _pulses(config)
    classes = classify(model, config.comp_dim, n_pulses=pulses.n_pulses)
    blocked = {ch: c for ch, c in classes.items() if c.verdict is not Verdict.IRRELEVANT}
    if blocked:
        detail = ', '.join(f"lambda_{ch} is {c.verdict.value.lower()} (exponent {c.exponent:g})" for ch, c in blocked.items())
        logger.error(f"Pipeline stopped: {detail}")
        raise RelevantFlowError(
            f"{detail}: the flow is not irrelevant, so resilience is not provable by this method"
        )

    rates = error_rates(model, config.grid, pulses)
    sweep = _sweep(config, seed)
    # the model's own rates get the stream after the sweep's p values
    at_model = logical_error_rate(
        steane_code(), rates, config.mc['samples'], seed,
        chunk_size=config.threshold['chunk_size'], p_index=len(config.threshold['p_values']),
    )
    target = config.threshold['target']
    chain = concatenation_map(rates.total, sweep.c, 3)
    levels = levels_needed(rates.total, sweep.c, target)
    phase = 'below threshold' if rates.total < sweep.pseudo_threshold else 'above threshold'
    logger.info(f"✓ Pipeline finished: eps_total = {rates.total:.4g}, {phase}")

    summary = {
        'classification': {ch: str(c) for ch, c in classes.items()},
        'eps': rates.as_dict(),
        'threshold': sweep.summary(),
        'logical_rate': at_model.as_dict(),
        'concatenation': chain.as_dict(),
        'target': target,
        'levels_needed': levels,
        'phase': phase,
    }
    lines = [f"{ch}: {c}" for ch, c in classes.items()]
    lines += [
        f"eps_total = {rates.total:.6g}",
        f"pseudo-threshold = {sweep.pseudo_threshold:.4g}",
        f"logical rate at eps = {at_model.rate:.4g} ± {at_model.stderr:.2g}",
        f"phase: {phase}",
        f"levels needed for {target:g}: {'unreachable' if levels is None else levels}",
    ]
    return Report(
        header=['level', 'logical_rate'], rows=[[i, r] for i, r in enumerate(chain.rates)],
        summary=summary, lines=lines,
    )


RUNNERS = {
    'classify': run_classify,
    'flow': run_flow,
    'epsilon': run_epsilon,
    'scaling-scan': run_scaling_scan,
    'coulomb': run_coulomb,
    'threshold': run_threshold,
    'pipeline': run_pipeline,
}
