#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Command-line front end for toric noncommutative algebra workspaces.

A workspace file (text form or JSON) defines the deformation matrix, the
algebras, morphisms, covers and derivations; each subcommand runs one
computation against it and prints a report, or JSON with --json.

Usage:
    # Validate everything in a workspace
    python toric_cli.py -w sphere.toric check

    # Normal form in the noncommutative torus
    python toric_cli.py -w torus.toric normalize T "xs*x*xs"

    # Compare braided derivations with tangent automorphisms at a cap
    python toric_cli.py -w line.toric xi-check Fm K --cap 1

Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 internal invariant breach.
"""

import argparse
import datetime
import io
import os
import sys
import threading
import time
from typing import Dict, List, Optional

from errors import ToricError, ValidationError
from workspace import (
    DEFAULT_CAP, Command, CommandResult, Workspace, dump_workspace, load_workspace,
    run_command, run_workspace,
)

# Detect if we can safely use emoji characters
USE_EMOJI = False
try:
    if sys.stdout.encoding != 'utf-8':
        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', errors='replace')
    if sys.stderr.encoding != 'utf-8':
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8', errors='replace')
    test_emoji = "✅ 📋"
    test_emoji.encode(sys.stdout.encoding)
    USE_EMOJI = True
except (UnicodeEncodeError, AttributeError, LookupError):
    USE_EMOJI = False

# Try to import yaml for config files
try:
    import yaml
    HAS_YAML = True
except ImportError:
    HAS_YAML = False

# Try to import preflight for problem-size checks
try:
    from preflight import SOLVER_COMMANDS, preflight_summary
    HAS_PREFLIGHT = True
except ImportError:
    HAS_PREFLIGHT = False

# Try to import psutil for monitoring
try:
    import psutil
    HAS_PSUTIL = True
except ImportError:
    HAS_PSUTIL = False


# ANSI color codes
class Colors:
    HEADER = '\033[95m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def colorize(text: str, color: str) -> str:
    """Add color to text if terminal supports it."""
    if sys.stdout.isatty():
        return f"{color}{text}{Colors.ENDC}"
    return text


def emoji(char: str, fallback: str = "") -> str:
    """Return emoji if supported, otherwise fallback text."""
    return char if USE_EMOJI else fallback


def print_header(text: str):
    print()
    print(colorize("=" * 60, Colors.CYAN))
    print(colorize(f"  {text}", Colors.BOLD + Colors.CYAN))
    print(colorize("=" * 60, Colors.CYAN))
    print()


def print_success(text: str):
    print(colorize(f"{emoji('✅', '[OK]')} {text}", Colors.GREEN))


def print_warning(text: str):
    print(colorize(f"{emoji('⚠️', '[WARN]')}  {text}", Colors.YELLOW))


def print_error(text: str):
    print(colorize(f"{emoji('❌', '[ERROR]')} {text}", Colors.RED))


def print_info(text: str):
    print(colorize(f"{emoji('ℹ️', '[INFO]')}  {text}", Colors.BLUE))


def print_step(step_num: int, text: str):
    """Print a numbered step."""
    print(colorize(f"\n{emoji('📌', '[*]')} Step {step_num}: ", Colors.BOLD + Colors.YELLOW) + text)


def format_duration(seconds: float) -> str:
    """Format duration in human-readable format."""
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        mins, secs = divmod(int(seconds), 60)
        return f"{mins}m {secs}s"
    else:
        hours, remainder = divmod(int(seconds), 3600)
        mins, secs = divmod(remainder, 60)
        return f"{hours}h {mins}m {secs}s"


# ============================================================================
# Configuration
# ============================================================================

DEFAULT_CONFIG = {
    'version': 1,
    'workspace': '',
    'cap': DEFAULT_CAP,
    'log_file': 'toric_nc.log',
    'log_interval': 30,
    'json': False,
    'max_unknowns': 5000,
}


def load_config(config_path: Optional[str]) -> Dict:
    """Load configuration from a YAML file, merged over DEFAULT_CONFIG."""
    if not config_path or not os.path.exists(config_path):
        return DEFAULT_CONFIG.copy()

    if not HAS_YAML:
        return _load_simple_config(config_path)

    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f)

    result = DEFAULT_CONFIG.copy()
    if config:
        unknown = sorted(set(config) - set(DEFAULT_CONFIG))
        if unknown:
            raise ValidationError(f"unknown configuration keys in {config_path}: {', '.join(unknown)}")
        result.update(config)
    return result


def _coerce_value(default, value: str):
    if isinstance(default, bool):
        return value.lower() in ('1', 'true', 'yes', 'on')
    if isinstance(default, int):
        try:
            return int(value)
        except ValueError:
            raise ValidationError(f"expected an integer in the configuration, got {value!r}") from None
    return value


def _load_simple_config(config_path: str) -> Dict:
    """Simple config loader when PyYAML is not available."""
    config = DEFAULT_CONFIG.copy()
    with open(config_path, 'r', encoding='utf-8') as f:
        for line in f:
            line = line.strip()
            if ':' in line and not line.startswith('#'):
                key, value = line.split(':', 1)
                key = key.strip()
                value = value.strip().strip('"').strip("'")
                if key in config:
                    config[key] = _coerce_value(DEFAULT_CONFIG[key], value)
    return config


# ============================================================================
# Monitoring
# ============================================================================

class ComputationMonitor:
    """Periodically log the running phase and system health to a file."""

    def __init__(self, log_file: str, log_interval: int = 30, echo: bool = False):
        self.log_file = log_file
        self.log_interval = log_interval
        self.echo = echo
        self.running = False
        self.thread = None
        self.start_time = None

        self.phase = ""
        self.cap: Optional[int] = None
        self.unknowns = 0
        self.errors: List[str] = []

        self.lock = threading.Lock()
        self._wake = threading.Event()

    def start(self, phase: str, cap: Optional[int] = None, unknowns: int = 0):
        """Start the monitoring thread."""
        self.update(phase=phase, cap=cap, unknowns=unknowns)
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(f"\n{'=' * 60}\n")
            f.write(f"{phase} started: {datetime.datetime.now()}\n")
            f.write(f"{'=' * 60}\n\n")

        self.running = True
        self.start_time = time.time()
        self.thread = threading.Thread(target=self._monitor_loop, daemon=True)
        self.thread.start()

    def stop(self):
        """Stop the monitoring thread and write the summary."""
        self.running = False
        self._wake.set()
        if self.thread:
            self.thread.join(timeout=5)
        elapsed = time.time() - self.start_time if self.start_time else 0
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(f"{self.phase} finished after {format_duration(elapsed)}; errors: {len(self.errors)}\n")
            for e in self.errors:
                f.write(f"  error: {e}\n")

    def update(self, phase: Optional[str] = None, cap: Optional[int] = None, unknowns: Optional[int] = None):
        with self.lock:
            if phase is not None:
                self.phase = phase
            if cap is not None:
                self.cap = cap
            if unknowns is not None:
                self.unknowns = unknowns

    def add_error(self, error: str):
        """Record an error."""
        with self.lock:
            self.errors.append(error)

    def _monitor_loop(self):
        """Background monitoring loop."""
        while self.running:
            self._log_status()
            self._wake.wait(self.log_interval)

    def status_line(self) -> str:
        elapsed = time.time() - self.start_time if self.start_time else 0

        mem_pct = "N/A"
        load = "N/A"
        if HAS_PSUTIL:
            mem = psutil.virtual_memory()
            mem_pct = f"{mem.percent:.1f}%"
        if hasattr(os, 'getloadavg'):
            load_avg = os.getloadavg()
            load = f"{load_avg[0]:.2f} {load_avg[1]:.2f} {load_avg[2]:.2f}"

        with self.lock:
            return (
                f"[{datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S')}] "
                f"Phase: {self.phase} | "
                f"Cap: {self.cap if self.cap is not None else '-'} | "
                f"Unknowns: {self.unknowns} | "
                f"Elapsed: {format_duration(elapsed)} | "
                f"Mem: {mem_pct} | "
                f"Load: {load}"
            )

    def _log_status(self):
        line = self.status_line()
        if self.echo:
            print(line, file=sys.stderr)
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(line + '\n')


# ============================================================================
# Output
# ============================================================================

def print_result(result: CommandResult, as_json: bool):
    if as_json:
        print(result.to_json())
        return
    print_header(f"{result.command}" + (f" (cap {result.cap})" if result.cap is not None else ""))
    for line in result.lines:
        print(line)
    print()
    if result.ok:
        print_success(f"{result.command} ok")
    else:
        print_warning(f"{result.command} reported a failed check")


def report_error(exc: BaseException, exit_code: int, as_json: bool):
    if as_json:
        import json
        doc = {"error": type(exc).__name__, "message": str(exc), "exit_code": exit_code}
        if getattr(exc, 'name', None):
            doc["name"] = exc.name
        if getattr(exc, 'index', None) is not None:
            doc["index"] = exc.index
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print_error(f"{type(exc).__name__}: {exc}")


def read_workspace(path: str) -> Workspace:
    if not path:
        raise ValidationError("no workspace file given; use -w/--workspace or set 'workspace' in the config")
    if not os.path.exists(path):
        raise ValidationError(f"workspace file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return load_workspace(f.read())


def write_workspace(ws: Workspace, path: str, as_json: bool = False):
    text = dump_workspace(ws, as_json)
    if path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


# ============================================================================
# Driver
# ============================================================================

COMMAND_ARGS = {
    'check': [],
    'normalize': [('algebra', {}), ('element', {})],
    'groebner': [('algebra', {})],
    'basis': [('algebra', {}), ('degree', {'nargs': '?', 'help': 'H-degree such as "1,0"'})],
    'hom-constraints': [('source', {}), ('target', {})],
    'cover-check': [('cover', {})],
    'glue': [('cover', {}), ('parts', {'nargs': '+', 'help': 'one element per chart'})],
    'pullback-cover': [('cover', {}), ('morphism', {})],
    'compose': [('f', {}), ('g', {})],
    'inverse-check': [('names', {'nargs': '+', 'help': 'an H-derivation, or SPACE STAGE'})],
    'te-aut': [('space', {}), ('stage', {})],
    'der-basis': [('algebra', {})],
    'bracket': [('x', {}), ('y', {})],
    'xi-check': [('space', {}), ('stage', {})],
}

COMMAND_HELP = {
    'check': 'Re-validate every object in the workspace',
    'normalize': 'Normal form of an element',
    'groebner': 'Reduced Groebner basis of an algebra',
    'basis': 'Standard monomials up to the cap',
    'hom-constraints': 'Constraint system for morphisms SOURCE -> TARGET',
    'cover-check': 'Validate a covering family',
    'glue': 'Glue a matching family of chart elements',
    'pullback-cover': 'Pull a cover back along a morphism',
    'compose': 'Compose two morphisms (F after G)',
    'inverse-check': 'Lift tangent vectors to points and check their inverses',
    'te-aut': 'Tangent automorphisms of SPACE at stage STAGE',
    'der-basis': 'Braided derivations up to the cap',
    'bracket': 'Bracket of two (H-)derivations',
    'xi-check': 'Compare j-stage derivations with tangent automorphisms',
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--workspace', '-w', default=argparse.SUPPRESS,
                        help='Workspace file (text form or JSON)')
    common.add_argument('--config', default=argparse.SUPPRESS,
                        help='Path to config file (default: toric.yaml)')
    common.add_argument('--cap', type=int, default=argparse.SUPPRESS,
                        help=f'Total-degree cap for truncated searches (default: {DEFAULT_CAP})')
    common.add_argument('--q1', action='store_true', default=argparse.SUPPRESS,
                        help='Specialize q -> 1 before computing')
    common.add_argument('--json', action='store_true', default=argparse.SUPPRESS,
                        help='Machine-readable output')
    common.add_argument('--log-file', default=argparse.SUPPRESS,
                        help='Monitor log file (default: toric_nc.log)')
    common.add_argument('--log-interval', type=int, default=argparse.SUPPRESS,
                        help='Monitor log interval in seconds (default: 30)')
    common.add_argument('--save', action='store_true', default=argparse.SUPPRESS,
                        help='Write the workspace back, with new objects and cap notes')

    parser = argparse.ArgumentParser(
        description='Exact computations in toric noncommutative geometry',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
Examples:
  # Validate a workspace
  python toric_cli.py -w sphere.toric check

  # Normal form in the noncommutative torus
  python toric_cli.py -w torus.toric normalize T "xs*x*xs"

  # Standard monomials of H-degree (1,0) up to total degree 3
  python toric_cli.py -w torus.toric basis T 1,0 --cap 3

  # Check a cover and glue a matching family
  python toric_cli.py -w sphere.toric cover-check north_south
  python toric_cli.py -w sphere.toric glue north_south "z" "z" --cap 2

  # Tangent automorphisms and the derivation comparison
  python toric_cli.py -w line.toric te-aut Fm Fm --cap 2
  python toric_cli.py -w line.toric xi-check Fm K --cap 1 --json

  # Convert between text form and JSON
  python toric_cli.py -w sphere.toric export sphere.json --format json
  python toric_cli.py -w sphere.toric import sphere.json
"""
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    for name, positionals in COMMAND_ARGS.items():
        p = sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
        for arg, kwargs in positionals:
            p.add_argument(arg, **kwargs)
        if name in ('pullback-cover', 'compose', 'bracket'):
            p.add_argument('--name', help='Name under which the result is stored')
        if name == 'der-basis':
            p.add_argument('--degree', help='Restrict to one derivation degree, e.g. "0,1"')

    p = sub.add_parser('export', parents=[common], help='Write the workspace in text form or JSON')
    p.add_argument('output', help="Output file, or '-' for stdout")
    p.add_argument('--format', choices=['dsl', 'json'], default='dsl')

    p = sub.add_parser('import', parents=[common], help='Read a workspace document into the workspace file')
    p.add_argument('input', help='Text-form or JSON workspace document')

    sub.add_parser('run', parents=[common], help='Execute the commands embedded in the workspace')
    return parser


def resolve_options(args: argparse.Namespace) -> Dict:
    """Command-line flags over config file over defaults."""
    config = load_config(getattr(args, 'config', 'toric.yaml'))
    return {
        'workspace': getattr(args, 'workspace', None) or config['workspace'],
        'cap': getattr(args, 'cap', None) if getattr(args, 'cap', None) is not None else int(config['cap']),
        'q1': getattr(args, 'q1', False),
        'json': getattr(args, 'json', False) or bool(config['json']),
        'log_file': getattr(args, 'log_file', None) or config['log_file'],
        'log_interval': getattr(args, 'log_interval', None) or int(config['log_interval']),
        'max_unknowns': int(config['max_unknowns']),
        'save': getattr(args, 'save', False),
    }


def command_from_args(args: argparse.Namespace) -> Command:
    positional: List[str] = []
    for arg, kwargs in COMMAND_ARGS[args.command]:
        value = getattr(args, arg)
        if value is None:
            continue
        positional.extend(value if isinstance(value, list) else [value])
    for option in ('name', 'degree'):
        value = getattr(args, option, None)
        if value:
            positional.extend([f'--{option}', value])
    return Command(args.command, tuple(positional))


def run_single(ws: Workspace, command: Command, opts: Dict) -> int:
    monitor = ComputationMonitor(opts['log_file'], opts['log_interval'])
    unknowns = 0
    if HAS_PREFLIGHT and command.name in SOLVER_COMMANDS:
        positional = [a for a in command.args if not a.startswith('--')]
        summary = preflight_summary(ws, command.name, positional, opts['cap'], opts['max_unknowns'])
        unknowns = summary['unknowns']
        if not opts['json']:
            print_info(f"Preflight: up to {unknowns} unknowns at cap {opts['cap']}")
            for w in summary['warnings']:
                print_warning(w)
    monitor.start(command.name, opts['cap'], unknowns)
    try:
        result = run_command(ws, command, cap=opts['cap'], q1=opts['q1'])
    except ToricError as exc:
        monitor.add_error(str(exc))
        raise
    finally:
        monitor.stop()
    print_result(result, opts['json'])
    return 0 if result.ok else 1


def dispatch(args: argparse.Namespace, opts: Dict) -> int:
    if args.command == 'import':
        with open(args.input, 'r', encoding='utf-8') as f:
            ws = load_workspace(f.read())
        target = opts['workspace']
        if not target:
            raise ValidationError("import needs -w/--workspace to know where to write")
        write_workspace(ws, target, target.endswith('.json'))
        if not opts['json']:
            print_success(f"Imported {args.input} into {target}")
        return 0

    ws = read_workspace(opts['workspace'])

    if args.command == 'export':
        write_workspace(ws, args.output, args.format == 'json')
        if args.output != '-' and not opts['json']:
            print_success(f"Workspace written to {args.output}")
        return 0

    if args.command == 'run':
        status = 0
        monitor = ComputationMonitor(opts['log_file'], opts['log_interval'])
        monitor.start('run', opts['cap'])
        try:
            for step, result in enumerate(run_workspace(ws, cap=opts['cap'], q1=opts['q1']), 1):
                if not opts['json']:
                    print_step(step, str(ws.commands[step - 1]))
                print_result(result, opts['json'])
                if not result.ok:
                    status = 1
        finally:
            monitor.stop()
    else:
        status = run_single(ws, command_from_args(args), opts)

    if opts['save']:
        write_workspace(ws, opts['workspace'], opts['workspace'].endswith('.json'))
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, 'json', False)
    try:
        opts = resolve_options(args)
        as_json = opts['json']
        return dispatch(args, opts)
    except ToricError as exc:
        report_error(exc, exc.exit_code, as_json)
        return exc.exit_code
    except OSError as exc:
        report_error(exc, 1, as_json)
        return 1
    except Exception as exc:  # anything else is a bug in the library
        report_error(exc, 3, as_json)
        return 3


if __name__ == '__main__':
    sys.exit(main())
