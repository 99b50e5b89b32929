"""
onionhash command line

Exit codes: 0 success/accept, 1 reject or partial failure, 2 usage or
configuration error.
"""

import functools
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
from pydantic import ValidationError

from .analysis import compliance_report, effective_preimage_space, guess_cost_estimate, render_report
from .analysis.bottleneck import DEFAULT_MD5_PREIMAGE_BITS
from .authd import run_exploit_demo, serve as serve_authd
from .chains import ChainSpec, Pepper, SaltSet, get_chain, legacy_md5_chain
from .collision import (
    CONFIRMED,
    NOT_VULNERABLE,
    TEXTCOLL_A,
    TEXTCOLL_B,
    DemoTranscript,
    record_propagation,
    run_local_demo,
    verify_embedded_pair,
)
from .credstore import CredentialStore
from .errors import DuplicateUsernameError, OnionHashError, UnknownUserError
from .logger import get_logger, set_log_level
from .migration import import_legacy_file, upgrade_store
from .utils import Reporter, config_value, load_config
from .utils.settings import (
    DEFAULT_BIND,
    CliConfig,
    OnionSettings,
    OutputFormat,
    load_pepper,
    resolve_cli_config,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2

DEFAULT_GUESS_RATES = (1_000_000_000, 1_000_000_000_000)


@dataclass
class CliState:
    config: Dict[str, Any]
    settings: OnionSettings
    options: CliConfig
    fixed_salts: bool = False
    verbose: bool = False
    flags: Dict[str, Optional[str]] = field(default_factory=dict)

    def reconfigure(self, **overrides: Optional[str]) -> "CliState":
        """Rebuild the state with command-level flags layered over the group-level ones"""
        flags = {**self.flags, **{k: v for k, v in overrides.items() if v is not None}}
        return build_state(verbose=self.verbose, fixed_salts=self.fixed_salts, **flags)

    @property
    def structured(self) -> bool:
        return self.options.output_format is OutputFormat.STRUCTURED

    @property
    def spec(self) -> ChainSpec:
        return get_chain(self.options.chain_version)

    @property
    def salt_factory(self) -> Callable[[], SaltSet]:
        return SaltSet.zeros if self.fixed_salts else SaltSet.generate

    def pepper(self, required: bool = True) -> Optional[Pepper]:
        if self.settings.pepper is None and not required:
            return None
        return load_pepper(self.settings)

    def open_store(self, create: bool = False) -> CredentialStore:
        return CredentialStore.open(
            self.options.store_path,
            create=create,
            default_chain=self.options.chain_version,
            salt_factory=self.salt_factory,
        )


def _is_temporary(path: Path) -> bool:
    temp_root = Path(tempfile.gettempdir()).resolve()
    try:
        path.resolve().relative_to(temp_root)
    except ValueError:
        return False
    return True


def build_state(
    config_path: Optional[str] = None,
    store: Optional[str] = None,
    chain: Optional[str] = None,
    output_format: Optional[str] = None,
    verbose: bool = False,
    fixed_salts: bool = False,
) -> CliState:
    try:
        config = load_config(config_path)
    except (FileNotFoundError, ValueError) as e:
        raise click.UsageError(str(e))
    settings = OnionSettings()
    try:
        options = resolve_cli_config(config, settings, store=store, chain=chain, output_format=output_format)
    except ValidationError as e:
        raise click.UsageError("; ".join(err["msg"] for err in e.errors()))
    if fixed_salts and not _is_temporary(options.store_path):
        raise click.UsageError("--test-fixed-salts is only allowed for stores under the temp directory")
    logger.debug(
        f"store={options.store_path} chain={options.chain_version} "
        f"pepper={options.pepper_source} format={options.output_format.value}"
    )
    flags = {"config_path": config_path, "store": store, "chain": chain, "output_format": output_format}
    return CliState(
        config=config, settings=settings, options=options, fixed_salts=fixed_salts, verbose=verbose, flags=flags
    )


def _fail(ctx: click.Context, error: Exception) -> None:
    code = getattr(error, "code", "error")
    click.echo(f"error: {code}: {error}", err=True)
    ctx.exit(EXIT_USAGE)


def _read_password(password_stdin: bool, prompt: str, confirm: bool = False) -> str:
    if password_stdin:
        line = sys.stdin.readline()
        return line[:-1] if line.endswith("\n") else line
    return click.prompt(prompt, hide_input=True, confirmation_prompt=confirm)


password_stdin_option = click.option(
    "--password-stdin", is_flag=True, help="Read the password from the first line of stdin"
)


def store_options(fn: Callable) -> Callable:
    """--config/--store/--chain on the command itself; passes the resulting CliState first"""

    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="YAML config file")
    @click.option("--store", default=None, help="Credential store path")
    @click.option("--chain", default=None, help="Chain version (fb2014, sha256-v1, md5)")
    @functools.wraps(fn)
    def wrapper(*args, config_path=None, store=None, chain=None, **kwargs):
        state = click.get_current_context().find_object(CliState)
        if config_path or store or chain:
            state = state.reconfigure(config_path=config_path, store=store, chain=chain)
        return fn(state, *args, **kwargs)

    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="YAML config file")
@click.option("--store", default=None, help="Credential store path")
@click.option("--chain", default=None, help="Chain version (fb2014, sha256-v1, md5)")
@click.option(
    "--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default=OutputFormat.HUMAN.value
)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.option("--test-fixed-salts", is_flag=True, hidden=True)
@click.pass_context
def cli(ctx, config_path, store, chain, output_format, verbose, test_fixed_salts):
    """Layered password hash chains: accounts, migration, analysis and the MD5 collision demo"""
    set_log_level("DEBUG" if verbose else "WARNING")
    ctx.obj = build_state(config_path, store, chain, output_format, verbose=verbose, fixed_salts=test_fixed_salts)


@cli.command()
@click.argument("username")
@password_stdin_option
@store_options
def register(state: CliState, username, password_stdin):
    """Create an account"""
    ctx = click.get_current_context()
    try:
        spec = state.spec
        pepper = state.pepper(required=spec.requires_pepper)
        password = _read_password(password_stdin, "Password", confirm=True)
        state.open_store(create=True).create_account(username, password, spec=spec, pepper=pepper)
    except DuplicateUsernameError as e:
        click.echo(f"rejected: {e}", err=True)
        ctx.exit(EXIT_REJECT)
    except OnionHashError as e:
        _fail(ctx, e)
    click.echo(f"registered {username} ({spec.version})")


@cli.command()
@click.argument("username")
@password_stdin_option
@store_options
def login(state: CliState, username, password_stdin):
    """Check a password; exit 0 on accept, 1 on reject"""
    ctx = click.get_current_context()
    try:
        store = state.open_store()
        pepper = state.pepper(required=store.default_spec.requires_pepper)
        password = _read_password(password_stdin, "Password")
        outcome = store.authenticate(username, password, pepper)
    except OnionHashError as e:
        _fail(ctx, e)
    click.echo(outcome.value)
    ctx.exit(EXIT_OK if outcome.accepted else EXIT_REJECT)


@cli.command("set-password")
@click.argument("username")
@password_stdin_option
@store_options
def set_password(state: CliState, username, password_stdin):
    """Replace a user's password with fresh salts"""
    ctx = click.get_current_context()
    try:
        store = state.open_store()
        spec = state.spec
        pepper = state.pepper(required=spec.requires_pepper)
        password = _read_password(password_stdin, "New password", confirm=True)
        store.set_password(username, password, pepper, spec=spec)
    except UnknownUserError as e:
        click.echo(f"rejected: {e}", err=True)
        ctx.exit(EXIT_REJECT)
    except OnionHashError as e:
        _fail(ctx, e)
    click.echo(f"password updated for {username}")


@cli.command()
@click.argument("legacy_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--in-place", is_flag=True, help="Upgrade md5 records already in the store")
@store_options
def migrate(state: CliState, legacy_file, in_place):
    """Wrap legacy MD5 digests (username:md5hex lines) into the configured chain"""
    ctx = click.get_current_context()
    if bool(legacy_file) == in_place:
        raise click.UsageError("give either LEGACY_FILE or --in-place")
    try:
        spec = state.spec
        pepper = state.pepper(required=spec.requires_pepper)
        if in_place:
            report = upgrade_store(state.open_store(), legacy_md5_chain(), spec, pepper, state.salt_factory)
        else:
            report = import_legacy_file(legacy_file, state.open_store(create=True), spec, pepper, state.salt_factory)
    except OnionHashError as e:
        _fail(ctx, e)
    for error in report.errors:
        click.echo(f"failed: {error}", err=True)
    if state.structured:
        click.echo(Reporter(structured=True).export_structured(report.as_pairs()), nl=False)
    else:
        click.echo(report.render())
    ctx.exit(EXIT_REJECT if report.failed else EXIT_OK)


@cli.command()
@click.argument("chain_version", required=False)
@click.option("--rate", "rates", multiple=True, type=float, help="Guesses per second (repeatable)")
@click.option("--annotation-bits", type=int, default=None, help="Best-known MD5 pre-image cost in bits")
@store_options
def analyze(state: CliState, chain_version, rates, annotation_bits):
    """Report bottleneck, compliance findings and exhaustive-search cost"""
    ctx = click.get_current_context()
    if annotation_bits is None:
        annotation_bits = config_value(state.config, "analyze.preimage_annotation_bits", DEFAULT_MD5_PREIMAGE_BITS)
    guess_rates = rates or config_value(state.config, "analyze.guess_rates", DEFAULT_GUESS_RATES)
    try:
        spec = get_chain(chain_version or state.options.chain_version)
        report = effective_preimage_space(spec, annotation_bits)
        findings = compliance_report(spec, annotation_bits)
        costs = [guess_cost_estimate(report.effective_bits, rate) for rate in guess_rates]
    except OnionHashError as e:
        _fail(ctx, e)
    click.echo(render_report(report, findings, costs, structured=state.structured), nl=False)


@cli.command("collide-demo")
@click.option("--server", default=None, help="Run against a running authd, e.g. http://127.0.0.1:8731")
@store_options
def collide_demo(state: CliState, server):
    """Register with one half of a colliding pair and log in with the other"""
    ctx = click.get_current_context()
    try:
        if server is None:
            transcript = run_local_demo(state.spec)
            click.echo(transcript.render(), nl=False)
            ctx.exit(transcript.exit_code)

        shared = verify_embedded_pair()
        click.echo(f"a={TEXTCOLL_A.decode('ascii')}")
        click.echo(f"b={TEXTCOLL_B.decode('ascii')}")
        click.echo(f"md5(a)=md5(b)={shared}")
        report = run_exploit_demo(server)
        spec = get_chain(report.chain) if report.chain else state.spec
        click.echo(f"server={server} chain={spec.version}")
        transcript = DemoTranscript()
        proof = record_propagation(transcript, spec)
        for line in transcript.lines + report.lines():
            click.echo(line)
        confirmed = proof.propagates and report.passed
        click.echo(CONFIRMED if confirmed else NOT_VULNERABLE)
    except OnionHashError as e:
        _fail(ctx, e)
    ctx.exit(EXIT_OK if confirmed else EXIT_REJECT)


@cli.command()
@click.option("--bind", default=None, help=f"host:port (default {DEFAULT_BIND})")
@store_options
def serve(state: CliState, bind):
    """Run the loopback authentication service"""
    ctx = click.get_current_context()
    set_log_level("DEBUG" if state.verbose else "INFO")
    bind = bind or state.settings.bind or config_value(state.config, "authd.bind", DEFAULT_BIND)
    try:
        spec = state.spec
        pepper = state.pepper(required=True)
        serve_authd(
            bind,
            state.options.store_path,
            pepper,
            spec,
            max_body_bytes=int(config_value(state.config, "authd.max_body_bytes", 8192)),
            hash_workers=int(config_value(state.config, "authd.hash_workers", 4)),
        )
    except OnionHashError as e:
        _fail(ctx, e)


@cli.command("list")
@store_options
def list_accounts(state: CliState):
    """List usernames and their chain versions"""
    ctx = click.get_current_context()
    try:
        rows = state.open_store().list_records()
    except OnionHashError as e:
        _fail(ctx, e)
    reporter = Reporter(structured=state.structured)
    if state.structured:
        click.echo(reporter.export_structured((name, version) for name, version, _ in rows), nl=False)
    else:
        click.echo(reporter.export_table("Accounts", ["username", "chain", "verifiable"], rows), nl=False)


def main() -> None:
    cli(prog_name="onionhash")
