# Copyright (c) 2026 snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

import snpeaks.env as env
from snpeaks.apis import manager
from snpeaks.apis.checkpoint import ResultStore
from snpeaks.apis.config import Config
from snpeaks.apis.pipeline import run_jobs
from snpeaks.errors import ConfigError, LabError, NumericalError
from snpeaks.field3d import (default_center, invert_a, lambda_to_a,
                             solve_normalized)
from snpeaks.geometries.radial import RadialGrid
from snpeaks.groundstate import (GroundStateBundle, identity_checks,
                                 shooting_ground_state, solve_ground_state)
from snpeaks.linops import (coercivity_bound, invertibility_ladder,
                            kernel_report, solve_correction)
from snpeaks.models.surface import (check_assumptions,
                                    verify_curvature_identity)
from snpeaks.pohozaev import (nonexistence_probe, pohozaev_from_solution,
                              two_peak_C5_probe)
from snpeaks.reduction import (ExpansionFit, PeakAnsatz, mu_a_expansion,
                               reduction_mu_a_pairs, verify_normal_law,
                               verify_tangential_law)
from snpeaks.utils.logger import logger
from snpeaks.utils.plotscript import write_gnuplot_script

__all__ = [
    'LabContext', 'CheckOutcome', 'run_command', 'cmd_ground_state',
    'cmd_linops', 'cmd_reduce', 'cmd_solve3d', 'cmd_pohozaev', 'cmd_sweep',
    'cmd_verify', 'EXIT_PASS', 'EXIT_FAIL', 'EXIT_CONFIG', 'EXIT_NUMERICAL'
]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULT_TOLERANCES = {
    'identity': 1e-5,
    'decay_variation': 0.02,
    'shooting': 1e-5,
    'curvature': 1e-8,
    'gamma_stability': 0.2,
    'normal_law': 0.05,
    'lambda_scaling': 0.02,
    'lambda_probe': 100.0,
}

SWEEP_COLUMNS = [
    'lambda', 'a', 'mu', 'delta', 'x1', 'x2', 'x3', 'residual', 'status'
]


@dataclass
class CheckOutcome:
    key: str
    passed: bool
    value: float = float('nan')
    tolerance: float = float('nan')
    message: str = ''

    def to_dict(self) -> Dict:
        return {
            'key': self.key,
            'passed': self.passed,
            'value': self.value,
            'tolerance': self.tolerance,
            'message': self.message
        }


class LabContext(object):
    """
    Shared state of one command: config, result store, and lazily built
    ground state, model and expensive intermediate results.
    """

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.store = ResultStore(cfg.output, config_hash=cfg.hash)
        self.tolerances = dict(DEFAULT_TOLERANCES)
        self.tolerances.update(cfg.tolerances)
        self._bundle = None
        self._cache = {}

    @property
    def workers(self) -> int:
        return self.cfg.workers

    @property
    def model(self):
        return self.cfg.potential

    @property
    def bundle(self) -> GroundStateBundle:
        if self._bundle is None:
            if self.store.have('bundle'):
                self._bundle = GroundStateBundle.load(
                    self.store.path('bundle'))
                logger.info('Loaded ground state from {}'.format(
                    self.store.path('bundle')))
            else:
                radial = self.cfg.radial
                self._bundle = solve_ground_state(
                    RadialGrid(radial['R_max'], radial['N']),
                    tol=radial['tol'],
                    kernel_scale=self.cfg.mutation['kernel_scale'])
                self._bundle.save(self.store.subdir('bundle'))
        return self._bundle

    @property
    def center(self) -> np.ndarray:
        center = self.cfg.reduction['center']
        if center is None:
            return self.cached('center', lambda: default_center(self.model))
        return np.asarray(center, dtype=np.float64)

    def cached(self, key: str, fn: Callable):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def write_fit(self, name: str, fit: ExpansionFit) -> str:
        path = self.store.push_table(
            name + '.csv',
            fit.rows(),
            columns=list(fit.rows()[0].keys()),
            header={'fit': fit.name})
        self.store.adopt(os.path.basename(fit.plot_script(path)))
        self.store.record(name, fit.summary())
        return path

    def solve3d(self,
                delta: float,
                cells: Optional[int] = None,
                box_factor: Optional[float] = None):
        """Normalized solution at a = a*/δ with the field3d settings.

        cells and box_factor override the field3d grid.
        """
        field3d = self.cfg.field3d
        cells = cells or field3d['cells']
        box_factor = box_factor or field3d['half_width']

        def _solve():
            return solve_normalized(
                self.model,
                self.bundle.a_star / delta,
                self.bundle,
                center=self.center,
                cells=cells,
                box_factor=box_factor,
                dt_factor=field3d['dt'] or 2.0,
                max_steps=field3d['max_steps'],
                tol=field3d['tol'])

        key = 'solve3d_{!r}_{}_{!r}'.format(float(delta), cells,
                                             float(box_factor))
        return self.cached(key, _solve)


def _passed(outcomes: List[bool]) -> int:
    return EXIT_PASS if all(outcomes) else EXIT_FAIL


@manager.COMMANDS.register('ground-state')
def cmd_ground_state(ctx: LabContext) -> int:
    """Ground state, its constants and identity residuals."""
    bundle = ctx.bundle
    errors = identity_checks(bundle)
    tol = ctx.tolerances['identity']
    rows = [{'identity': k, 'relative_error': v, 'passed': v <= tol}
            for k, v in errors.items()]
    decay_ok = bundle.decay_variation < ctx.tolerances['decay_variation']
    rows.append({
        'identity': 'decay_variation',
        'relative_error': bundle.decay_variation,
        'passed': decay_ok
    })
    ctx.store.push_table('ground_state.csv', rows,
                         columns=['identity', 'relative_error', 'passed'])
    ctx.store.record('ground_state', bundle.constants())
    return _passed([r['passed'] for r in rows])


@manager.COMMANDS.register('linops')
def cmd_linops(ctx: LabContext) -> int:
    """Kernel of the sector operators and the coercivity gap."""
    report = _kernel_report(ctx)
    ctx.store.push_table(
        'kernel.csv',
        report.rows,
        columns=['kind', 'sector', 'index', 'eigenvalue', 'zero_mode',
                 'overlap'])
    ctx.store.push_text('kernel.txt', report.summary() + '\n')
    ctx.store.record('gamma_bar', report.gamma_bar)
    return _passed([report.dimensions_match(), report.gamma_bar > 0])


def _kernel_report(ctx: LabContext):
    spectral = ctx.cfg.spectral

    def _report():
        return kernel_report(
            ctx.bundle,
            RadialGrid(spectral['R_max'], spectral['N']),
            ells=spectral['ells'],
            kernel_tol=spectral['kernel_tol'],
            num_eigs=spectral['num_eigs'])

    return ctx.cached('kernel_report', _report)


def _reduction_fits(ctx: LabContext) -> Dict[str, ExpansionFit]:

    def _fits():
        reduction = ctx.cfg.reduction
        model, bundle, b0 = ctx.model, ctx.bundle, ctx.center
        eps = reduction['eps']
        rho_factor = reduction['rho_factor']
        fits = {
            'normal_law':
            verify_normal_law(model, b0, eps, bundle, ctx.workers,
                              ctx.tolerances['normal_law'], rho_factor),
            'tangential_law':
            verify_tangential_law(
                model, b0, eps, bundle, ctx.workers, rho_factor=rho_factor),
        }
        pairs = reduction_mu_a_pairs(
            model, b0, eps, bundle,
            use_correction=True,
            workers=ctx.workers,
            rho_factor=rho_factor,
            correction_kwargs={'cells': reduction['correction_cells']})
        fits['mu_a'] = mu_a_expansion(pairs, bundle, P0=model.P0)
        return fits

    return ctx.cached('reduction_fits', _fits)


def _correction_ladder(ctx: LabContext) -> List[Dict]:
    """‖φ‖_a and the discrete invertibility estimate ϱ along the ε ladder."""

    def _rows():
        reduction = ctx.cfg.reduction
        rows = []
        for eps in reduction['eps']:
            ansatz = PeakAnsatz(eps, ctx.center, ctx.bundle,
                                P0=ctx.model.P0)
            result = solve_correction(
                ansatz, ctx.model, cells=reduction['correction_cells'])
            row = {'eps': float(eps)}
            row.update(result.to_dict())
            rows.append(row)
        return rows

    return ctx.cached('correction_ladder', _rows)


def _invertibility(ctx: LabContext) -> Dict:
    rows = _correction_ladder(ctx)
    if all(r['norm_a'] == 0 for r in rows):
        # φ ≡ 0: nothing is inverted
        return {'passed': True, 'rho_min': float('nan'), 'changes': []}
    return invertibility_ladder([r['eps'] for r in rows],
                                [r['rho'] for r in rows])


@manager.COMMANDS.register('reduce')
def cmd_reduce(ctx: LabContext) -> int:
    """Peak-location laws, the μ–a expansion and ϱ along the reduction."""
    fits = _reduction_fits(ctx)
    for name, fit in fits.items():
        ctx.write_fit('reduce_' + name, fit)
    rows = _correction_ladder(ctx)
    ctx.store.push_table(
        'reduce_correction.csv', rows, columns=list(rows[0].keys()))
    verdict = _invertibility(ctx)
    ctx.store.record('invertibility', verdict)
    return _passed([fit.passed for fit in fits.values()] +
                   [verdict['passed']])


@manager.COMMANDS.register('solve3d')
def cmd_solve3d(ctx: LabContext) -> int:
    """Normalized 3D solutions over the δ ladder; fails if the energy rose."""
    rows, pairs = [], []
    fields = ctx.store.subdir('fields')
    for delta in ctx.cfg.field3d['deltas']:
        result = ctx.solve3d(delta)
        result.u.save(os.path.join(fields, 'u_delta{:.4f}'.format(delta)))
        rows.append(result.to_dict())
        pairs.append((result.a, result.mu))
    ctx.store.push_table('solve3d.csv', rows, columns=list(rows[0].keys()))
    if len(pairs) >= 4:
        # reported only; the fixed-grid error does not vanish with δ
        ctx.write_fit('solve3d_mu_a',
                      mu_a_expansion(pairs, ctx.bundle, P0=ctx.model.P0))
    return _passed([row['energy_rises'] == 0 for row in rows])


def _pohozaev_rows(ctx: LabContext) -> List[Dict]:

    def _rows():
        cfg = ctx.cfg.pohozaev
        result = ctx.solve3d(cfg['delta'], cells=cfg['cells'],
                             box_factor=cfg['half_width'])
        rows = []
        for rho_factor in cfg['rho_factors']:
            for j in range(3):
                report = pohozaev_from_solution(result, ctx.model, rho_factor,
                                                j)
                row = report.to_dict()
                row['balanced'] = report.balanced
                rows.append(row)
        return rows

    return ctx.cached('pohozaev_rows', _rows)


def _two_peak(ctx: LabContext) -> ExpansionFit:
    cfg = ctx.cfg.pohozaev
    b1, b2 = cfg['centers']
    return ctx.cached(
        'two_peak', lambda: two_peak_C5_probe(ctx.bundle, b1, b2, cfg[
            'probe_eps'], cfg['probe_rho'], P0=ctx.model.P0))


def _nonexistence(ctx: LabContext) -> Dict:
    cfg = ctx.cfg.pohozaev
    b1, b2 = cfg['centers']
    return ctx.cached(
        'nonexistence', lambda: nonexistence_probe(
            ctx.model, b1, b2, cfg['probe_eps'], ctx.bundle, cfg[
                'probe_rho'], threshold=cfg['threshold']))


@manager.COMMANDS.register('pohozaev')
def cmd_pohozaev(ctx: LabContext) -> int:
    """Local Pohozaev balance of a solution and the two-peak probes."""
    rows = _pohozaev_rows(ctx)
    ctx.store.push_table('pohozaev.csv', rows, columns=list(rows[0].keys()))

    fit = _two_peak(ctx)
    ctx.write_fit('pohozaev_two_peak', fit)

    verdict = _nonexistence(ctx)
    ctx.store.push_table(
        'pohozaev_nonexistence.csv',
        verdict['rows'],
        columns=['eps', 'C5_over_eps4', 'moment_over_eps4', 'ratio'],
        header={'threshold': verdict['threshold']})
    ctx.store.record('nonexistence', {
        k: v
        for k, v in verdict.items() if k not in ('rows', 'probe')
    })
    return _passed([all(r['balanced'] for r in rows), fit.passed,
                    verdict['passed']])


def _sweep_job(job) -> Dict:
    model, lam, bundle, center, kwargs = job
    result = lambda_to_a(model, lam, bundle, center, **kwargs)
    peak = result.w.argmax_interpolated()
    return {
        'lambda': lam,
        'a': result.a,
        'mu': result.mu,
        'delta': bundle.a_star / result.a,
        'x1': float(peak[0]),
        'x2': float(peak[1]),
        'x3': float(peak[2]),
        'residual': result.residual,
        'status': 'ok'
    }


def _sweep_kwargs(ctx: LabContext) -> Dict:
    field3d = ctx.cfg.field3d
    return {'cells': field3d['cells'], 'box_factor': field3d['half_width']}


@manager.COMMANDS.register('sweep')
def cmd_sweep(ctx: LabContext) -> int:
    """a(λ) over the λ ladder and inversion at the requested a values."""
    sweep = ctx.cfg.sweep
    lambdas = sorted(float(v) for v in sweep['lambdas'])
    center = ctx.center
    kwargs = _sweep_kwargs(ctx)
    jobs = [(ctx.model, lam, ctx.bundle, center, kwargs) for lam in lambdas]

    rows = []
    for lam, result in zip(lambdas,
                           run_jobs(_sweep_job, jobs, ctx.workers,
                                    'Sweeping lambda')):
        if result.ok:
            rows.append(result.value)
        else:
            logger.warning('lambda={} failed: {}'.format(lam, result.error))
            row = {k: float('nan') for k in SWEEP_COLUMNS}
            row.update({'lambda': lam, 'status': result.error_type})
            rows.append(row)
    path = ctx.store.push_table('sweep.csv', rows, columns=SWEEP_COLUMNS)
    _sweep_plots(ctx, path)

    ok = [r for r in rows if r['status'] == 'ok']
    failed = len(rows) - len(ok)
    monotone = bool(np.all(np.diff([r['a'] for r in ok]) > 0))
    if not monotone:
        logger.warning('a(lambda) is not monotone over the ladder')

    targets = []
    for a in sweep['targets']:
        try:
            result = invert_a(
                ctx.model,
                float(a),
                ctx.bundle,
                center, [r['lambda'] for r in ok],
                samples=np.array([r['a'] for r in ok]),
                **kwargs)
            targets.append({
                'a_target': float(a),
                'lambda': result.lam,
                'a': result.a,
                'relative_error': abs(result.a - a) / a,
                'status': 'ok'
            })
        except LabError as e:
            failed += 1
            logger.warning('Inversion at a={} failed: {}'.format(a, e))
            targets.append({
                'a_target': float(a),
                'lambda': float('nan'),
                'a': float('nan'),
                'relative_error': float('nan'),
                'status': type(e).__name__
            })
    if targets:
        ctx.store.push_table(
            'sweep_targets.csv',
            targets,
            columns=['a_target', 'lambda', 'a', 'relative_error', 'status'])
    ctx.store.record('sweep', {'failed_rows': failed, 'monotone': monotone})
    return EXIT_PASS if failed == 0 else EXIT_FAIL


def _sweep_plots(ctx: LabContext, csv_path: str):
    base = os.path.splitext(csv_path)[0]
    scripts = [
        ('_a_lambda.gp', 'a(lambda)', 'lambda', 'a', [('1:2', 'a')]),
        ('_mu_a.gp', '-mu delta^2 - 1', 'delta', '|-mu delta^2 - 1|',
         [('4:(abs(-$3*$4**2 - 1))', 'measured')]),
        ('_offset.gp', 'peak position', 'delta', 'x3', [('4:7', 'x3')]),
    ]
    for suffix, title, xlabel, ylabel, series in scripts:
        path = base + suffix
        write_gnuplot_script(
            path, csv_path, title=title, xlabel=xlabel, ylabel=ylabel,
            series=series, logscale=suffix != '_offset.gp')
        ctx.store.adopt(os.path.basename(path))


# ---------------------------------------------------------------- checks


@manager.CHECKS.register('ground_state.nehari')
def check_nehari(ctx: LabContext) -> CheckOutcome:
    value = identity_checks(ctx.bundle)['nehari']
    tol = ctx.tolerances['identity']
    return CheckOutcome('ground_state.nehari', value <= tol, value, tol)


@manager.CHECKS.register('ground_state.pohozaev')
def check_pohozaev_pair(ctx: LabContext) -> CheckOutcome:
    value = identity_checks(ctx.bundle)['pohozaev']
    tol = ctx.tolerances['identity']
    return CheckOutcome('ground_state.pohozaev', value <= tol, value, tol)


@manager.CHECKS.register('ground_state.energy_ratio')
def check_energy_ratio(ctx: LabContext) -> CheckOutcome:
    value = identity_checks(ctx.bundle)['energy_ratio']
    tol = ctx.tolerances['identity']
    return CheckOutcome('ground_state.energy_ratio', value <= tol, value,
                        tol)


@manager.CHECKS.register('ground_state.decay')
def check_decay(ctx: LabContext) -> CheckOutcome:
    value = ctx.bundle.decay_variation
    tol = ctx.tolerances['decay_variation']
    return CheckOutcome('ground_state.decay', bool(value < tol), value, tol)


@manager.CHECKS.register('ground_state.shooting_agreement')
def check_shooting(ctx: LabContext) -> CheckOutcome:
    oracle = shooting_ground_state()
    value = abs(oracle.a_star / ctx.bundle.a_star - 1)
    tol = ctx.tolerances['shooting']
    return CheckOutcome('ground_state.shooting_agreement', value <= tol,
                        value, tol, 'oracle a*={:.10g}'.format(oracle.a_star))


@manager.CHECKS.register('spectral.kernel_dimensions')
def check_kernel_dimensions(ctx: LabContext) -> CheckOutcome:
    report = _kernel_report(ctx)
    return CheckOutcome(
        'spectral.kernel_dimensions', report.dimensions_match(),
        message=str({k: {l: n for l, n in v.items() if n}
                     for k, v in report.kernel_dimensions.items()}))


@manager.CHECKS.register('spectral.coercivity')
def check_coercivity(ctx: LabContext) -> CheckOutcome:
    spectral = ctx.cfg.spectral
    gamma = _kernel_report(ctx).gamma_bar
    fine, _ = coercivity_bound(
        ctx.bundle,
        spectral['ells'],
        RadialGrid(spectral['R_max'], 2 * spectral['N']),
        spectral['kernel_tol'],
        spectral['num_eigs'])
    change = abs(fine / gamma - 1) if gamma > 0 else float('inf')
    tol = ctx.tolerances['gamma_stability']
    return CheckOutcome('spectral.coercivity', gamma > 0 and change <= tol,
                        gamma, tol,
                        'gamma_bar on the doubled grid {:.6g}'.format(fine))


@manager.CHECKS.register('spectral.invertibility')
def check_invertibility(ctx: LabContext) -> CheckOutcome:
    verdict = _invertibility(ctx)
    return CheckOutcome(
        'spectral.invertibility', verdict['passed'], verdict['rho_min'],
        message='relative changes {}'.format(
            np.round(verdict['changes'], 6).tolist()))


@manager.CHECKS.register('potential.curvature_identity')
def check_curvature(ctx: LabContext) -> CheckOutcome:
    model = ctx.model
    if model.surface is None:
        return CheckOutcome('potential.curvature_identity', True,
                            message='no surface')
    points = model.surface.sample(32)
    value = max(verify_curvature_identity(model, p) for p in points)
    tol = ctx.tolerances['curvature']
    return CheckOutcome('potential.curvature_identity', value <= tol, value,
                        tol)


@manager.CHECKS.register('potential.assumptions')
def check_potential_assumptions(ctx: LabContext) -> CheckOutcome:
    report = check_assumptions(ctx.model, ctx.center)
    return CheckOutcome(
        'potential.assumptions',
        report.is_candidate and report.is_nondegenerate,
        float(np.linalg.norm(report.grad_tangent)),
        message='b0={} satisfies_ptilde={}'.format(
            np.round(report.point, 12).tolist(), report.satisfies_ptilde))


def _fit_check(key: str, fit: ExpansionFit, value: float) -> CheckOutcome:
    return CheckOutcome(key, bool(fit.passed), value, message=repr(fit))


@manager.CHECKS.register('reduction.normal_law')
def check_normal_law(ctx: LabContext) -> CheckOutcome:
    fit = _reduction_fits(ctx)['normal_law']
    return _fit_check('reduction.normal_law', fit,
                      fit.details.get('ratio', fit.power))


@manager.CHECKS.register('reduction.tangential_law')
def check_tangential_law(ctx: LabContext) -> CheckOutcome:
    fit = _reduction_fits(ctx)['tangential_law']
    return _fit_check('reduction.tangential_law', fit,
                      fit.details['offset_power'])


@manager.CHECKS.register('reduction.mu_a_expansion')
def check_mu_a(ctx: LabContext) -> CheckOutcome:
    fit = _reduction_fits(ctx)['mu_a']
    return _fit_check('reduction.mu_a_expansion', fit, fit.remainder_power)


@manager.CHECKS.register('field3d.lambda_scaling')
def check_lambda_scaling(ctx: LabContext) -> CheckOutcome:
    lam = ctx.tolerances['lambda_probe']
    result = lambda_to_a(ctx.model, lam, ctx.bundle, ctx.center,
                         **_sweep_kwargs(ctx))
    value = abs(result.a / np.sqrt(lam) / ctx.bundle.a_star - 1)
    tol = ctx.tolerances['lambda_scaling']
    return CheckOutcome('field3d.lambda_scaling', value <= tol, value, tol)


@manager.CHECKS.register('field3d.energy_monotone')
def check_energy_monotone(ctx: LabContext) -> CheckOutcome:
    results = [ctx.solve3d(delta) for delta in ctx.cfg.field3d['deltas']]
    worst = max(r.energy_rise_max for r in results)
    return CheckOutcome(
        'field3d.energy_monotone',
        all(r.energy_rises == 0 for r in results), worst,
        message='energy rises per delta {}'.format(
            [r.energy_rises for r in results]))


@manager.CHECKS.register('pohozaev.balance')
def check_pohozaev_balance(ctx: LabContext) -> CheckOutcome:
    rows = _pohozaev_rows(ctx)
    worst = max(abs(r['residual']) / r['estimate'] for r in rows)
    return CheckOutcome('pohozaev.balance',
                        all(r['balanced'] for r in rows), worst, 1.0,
                        'max |residual|/estimate')


@manager.CHECKS.register('pohozaev.two_peak_slope')
def check_two_peak(ctx: LabContext) -> CheckOutcome:
    fit = _two_peak(ctx)
    return _fit_check('pohozaev.two_peak_slope', fit, fit.power)


@manager.CHECKS.register('pohozaev.nonexistence')
def check_nonexistence(ctx: LabContext) -> CheckOutcome:
    verdict = _nonexistence(ctx)
    return CheckOutcome('pohozaev.nonexistence', verdict['passed'],
                        verdict['min_ratio'], verdict['threshold'])


def _selected_checks(cfg: Config) -> List[str]:
    keys = manager.CHECKS.keys_with_prefix()
    if cfg.checks:
        unknown = [
            k for k in cfg.checks if not manager.CHECKS.keys_with_prefix(k)
        ]
        if unknown:
            raise ConfigError('Unknown checks {}'.format(unknown))
        keys = [
            k for k in keys if any(k.startswith(c) for c in cfg.checks)
        ]
    if cfg.only:
        keys = [k for k in keys if k.startswith(cfg.only)]
    return keys


@manager.COMMANDS.register('verify')
def cmd_verify(ctx: LabContext) -> int:
    """Runs the selected checks and writes the pass/fail table."""
    outcomes = []
    for key in _selected_checks(ctx.cfg):
        logger.info('Check {}'.format(key))
        try:
            outcome = manager.CHECKS[key](ctx)
        except NumericalError as e:
            outcome = CheckOutcome(key, False, message='{}: {}'.format(
                type(e).__name__, e))
        outcome.passed = bool(outcome.passed)
        outcomes.append(outcome)
        logger.info('  {} {}'.format('PASS' if outcome.passed else 'FAIL',
                                     outcome.message))

    ctx.store.push_table(
        'verify.csv', [o.to_dict() for o in outcomes],
        columns=['key', 'passed', 'value', 'tolerance', 'message'])
    failing = [o.key for o in outcomes if not o.passed]
    ctx.store.record('verify', {'failing': failing,
                                'checked': [o.key for o in outcomes]})
    if failing:
        logger.error('Failing checks: {}'.format(', '.join(failing)))
        return EXIT_FAIL
    logger.info('All {} checks passed'.format(len(outcomes)))
    return EXIT_PASS


def run_command(name: str,
                cfg: Optional[Config] = None,
                **cfg_kwargs) -> int:
    """
    Run a registered command and map its outcome to the exit-code contract:
    0 pass, 1 check failure, 2 configuration error, 3 numerical failure.
    """
    try:
        if cfg is None:
            cfg = Config(**cfg_kwargs)
        if name not in manager.COMMANDS:
            raise ConfigError('Unknown command {}, choose from {}'.format(
                name, manager.COMMANDS.keys_with_prefix()))
        logger.info('\n{}'.format(env.get_env_info()))
        logger.info('\n{}'.format(cfg))
        ctx = LabContext(cfg)
        ctx.store.record('environment', env.get_stack_versions())
        logger.info('Potential: {}'.format(ctx.model))
        code = manager.COMMANDS[name](ctx)
    except NumericalError as e:
        logger.error('{}: {}'.format(type(e).__name__, e))
        return EXIT_NUMERICAL
    except (LabError, ValueError) as e:
        logger.error('{}: {}'.format(type(e).__name__, e))
        return EXIT_CONFIG
    logger.info('{} finished with exit code {}'.format(name, code))
    return code
