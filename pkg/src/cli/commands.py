"""
CLI Commands for the MUSIC imaging toolkit
"""

import os
import sys
from typing import Optional

import click
import numpy as np
import pandas as pd

# Rich imports for clean CLI
from rich.console import Console
from rich.panel import Panel
from rich import box

# Add the src directory to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from src.core.special import resolution_profile
from src.imaging.predictors import VARIANTS
from src.pipeline.engine import ImagingEngine
from src.pipeline.export import CSV_FLOAT_FORMAT
from src.pipeline.identities import run_identity_checks
from src.utils.config import PRESETS, SceneConfig, list_presets, load_scene
from src.utils.exceptions import ConfigurationError, ImagingError, NumericalError
from src.utils.logger import apply_environment, get_logger, set_level

logger = get_logger(__name__)
console = Console()

DEFAULT_SCENE = os.path.join('config', 'config.yaml')

EXIT_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


# Custom Click classes to add -h support
class CustomCommand(click.Command):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Add -h as an alias for --help
        for param in self.params:
            if param.name == 'help' and isinstance(param, click.Option):
                if '-h' not in param.opts:
                    param.opts.append('-h')


class CustomGroup(click.Group):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Add -h as an alias for --help
        for param in self.params:
            if param.name == 'help' and isinstance(param, click.Option):
                if '-h' not in param.opts:
                    param.opts.append('-h')


def load_environment():
    """Load environment variables from the .env file in the working directory"""
    try:
        from dotenv import find_dotenv, load_dotenv
        load_dotenv(find_dotenv(usecwd=True))
    except ImportError:
        logger.warning("[ENV  ] python-dotenv not installed, using system environment variables")
    # Loggers were built at import time, before .env was read
    apply_environment()


def exit_code_for(error: Exception) -> int:
    """Map an imaging error to the process exit code"""
    if isinstance(error, ConfigurationError):
        return EXIT_PARSE_ERROR
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL_ERROR
    return EXIT_FAILURE


def _fail(ctx: click.Context, error: Exception):
    console.print(f"[red]Error ({type(error).__name__}): {error}[/red]")
    ctx.exit(exit_code_for(error))


@click.group(cls=CustomGroup, context_settings=dict(help_option_names=['-h', '--help']))
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              default=None, help='Override LOG_LEVEL for this invocation')
@click.pass_context
def cli(ctx, log_level):
    """🔭 MUSIC imaging of thin inclusions, cracks and small inclusions"""
    load_environment()
    ctx.ensure_object(dict)
    if log_level:
        set_level(log_level)

    # Show minimal banner only when running commands, not help or CSV to stdout
    if ctx.invoked_subcommand not in (None, 'profile'):
        banner = Panel.fit(
            "[bold cyan]🔭 MUSIC Imaging[/bold cyan]",
            box=box.SIMPLE,
            border_style="cyan"
        )
        console.print(banner)


def _apply_overrides(cfg: SceneConfig, out, signal_dim, tau, variant, noise, seed, cap) -> SceneConfig:
    if out is not None:
        cfg.output.directory = out
    if signal_dim is not None:
        cfg.signal_dim = signal_dim
    if tau is not None:
        cfg.tau = tau
    if variant is not None:
        cfg.variant = variant
    if noise is not None:
        cfg.noise.level = noise
    if seed is not None:
        cfg.noise.seed = seed
    if cap is not None:
        cfg.cap = cap
    return cfg


@cli.command(cls=CustomCommand)
@click.argument('scene_file', required=False, type=click.Path())
@click.option('--out', '-o', type=click.Path(file_okay=False), help='Output directory for maps and summary')
@click.option('--preset', '-p', type=click.Choice(sorted(PRESETS)), help='Start from a named preset')
@click.option('--signal-dim', type=click.IntRange(min=0), help='Fix the signal-space dimension')
@click.option('--tau', type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
              help='Relative singular-value threshold')
@click.option('--variant', type=click.Choice(VARIANTS), help='J1 weighting of the permeability predictors')
@click.option('--noise', type=click.FloatRange(min=0), help='Relative noise level')
@click.option('--seed', type=int, help='Noise seed')
@click.option('--cap', type=click.FloatRange(min=0, min_open=True), help='Cap for MUSIC and predictor maps')
@click.option('--no-write', is_flag=True, help='Print the summary without writing files')
@click.pass_context
def run(ctx, scene_file, out, preset, signal_dim, tau, variant, noise, seed, cap, no_write):
    """🖼️  Image a scene: synthesize, decompose, map, predict, compare"""
    if scene_file is None and preset is None:
        scene_file = DEFAULT_SCENE
    logger.info(f"[SCENE] CLI run: scene_file={scene_file}, preset={preset}")

    try:
        cfg = load_scene(scene_file, preset)
        cfg = _apply_overrides(cfg, out, signal_dim, tau, variant, noise, seed, cap)

        engine = ImagingEngine(cfg)
        report = engine.run()
        written = [] if no_write else engine.save_results()
    except ImagingError as e:
        _fail(ctx, e)
        return

    run_text = f"[bold]Scene[/bold] [cyan]{report.scene}[/cyan] ({report.model})\n\n"
    run_text += f"[bold]omega:[/bold] {report.omega:.5f}  [bold]N:[/bold] {report.n_directions}  "
    run_text += f"[bold]M:[/bold] {report.points}\n"
    run_text += f"[bold]Signal dimension:[/bold] [yellow]{report.signal_dim}[/yellow]  (noise {report.noise_dim})\n"
    if not report.hypotheses_met:
        run_text += "[yellow]⚠ direction count below the predictor hypothesis[/yellow]\n"

    run_text += "\n[bold]Comparisons[/bold]\n"
    for label, comparison in report.comparisons.items():
        run_text += (
            f"[cyan]{label}[/cyan]: median {comparison.median_relative_deviation:.4f}, "
            f"max {comparison.max_relative_deviation:.4f}\n"
        )

    run_text += "\n[bold]Top peaks[/bold]\n"
    for peak in report.peaks:
        run_text += f"({peak.x:+.4f}, {peak.y:+.4f}) [green]{peak.value:.4g}[/green]\n"

    if written:
        run_text += f"\n[dim]{len(written)} files written to {cfg.output.directory}[/dim]"

    console.print(Panel(run_text, box=box.SIMPLE, border_style="green"))


@cli.command(cls=CustomCommand)
@click.pass_context
def identities(ctx):
    """🧮 Check the Bessel, Gram and MUSIC/migration identities"""
    logger.info("[IMAGE] Running identity checks")

    try:
        checks = run_identity_checks()
    except ImagingError as e:
        _fail(ctx, e)
        return

    check_text = "[bold]Identity Checks[/bold]\n\n"
    for check in checks:
        mark = "[green]✓[/green]" if check.passed else "[red]✗[/red]"
        check_text += (
            f"{mark} [cyan]{check.name}[/cyan]: max deviation {check.max_deviation:.3e} "
            f"(tolerance {check.tolerance:.0e})\n"
        )
        if check.note:
            check_text += f"    [dim]{check.note}[/dim]\n"

    console.print(Panel(check_text, box=box.SIMPLE, border_style="blue"))
    if not all(check.passed for check in checks):
        ctx.exit(EXIT_NUMERICAL_ERROR)


@cli.command(cls=CustomCommand)
def presets():
    """📋 List available scene presets"""
    preset_text = "[bold]Available Presets[/bold]\n\n"
    for name in list_presets():
        preset = PRESETS[name]
        geometry = preset['geometry'].get('curve') or f"{len(preset['geometry']['inclusions'])} inclusions"
        preset_text += (
            f"[cyan]{name}[/cyan]: model={preset['model']}, N={preset['n_directions']}, "
            f"lambda={preset['wavelength']}, geometry={geometry}\n"
        )

    console.print(Panel(preset_text, box=box.SIMPLE, border_style="magenta"))


@cli.command(cls=CustomCommand)
@click.option('--order', type=click.Choice(['0', '1']), default='1', help='Bessel order of the profile')
@click.option('--wavelength', type=click.FloatRange(min=0, min_open=True), default=0.4, help='Wavelength')
@click.option('--max-radius', type=click.FloatRange(min=0, min_open=True), default=0.4,
              help='Largest distance from the scatterer')
@click.option('--points', type=click.IntRange(min=2), default=201, help='Number of samples')
@click.option('--out', '-o', type=click.Path(dir_okay=False), help='CSV destination (stdout when omitted)')
@click.pass_context
def profile(ctx, order, wavelength, max_radius, points, out: Optional[str]):
    """📈 Radial single-point blow-up profile |1 - J_p(w r)^2|^-1"""
    omega = 2.0 * np.pi / wavelength
    radius = np.linspace(0.0, max_radius, points)

    try:
        values = resolution_profile(int(order), omega, radius)
    except ImagingError as e:
        _fail(ctx, e)
        return

    frame = pd.DataFrame({'r': radius, 'profile': values})
    if out is None:
        click.echo(frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT), nl=False)
        return

    try:
        frame.to_csv(out, index=False, float_format=CSV_FLOAT_FORMAT)
    except OSError as e:
        console.print(f"[red]Error: failed to write {out}: {e}[/red]")
        ctx.exit(EXIT_FAILURE)
    logger.info(f"[EXPRT] Wrote order-{order} profile to {out}")


def main():
    """Main entry point"""
    try:
        cli()
    except KeyboardInterrupt:
        click.echo("\nOperation cancelled by user")
        sys.exit(0)
    except Exception as e:
        click.echo(f"Unexpected error: {e}")
        sys.exit(EXIT_FAILURE)


if __name__ == '__main__':
    main()
