"""Command-line interface: ``degdyn <command> [flags]`` prints one JSON document.

Exit status is 0 on success, 2 on input errors (bad flags, unparsable
maps, guard violations) and 3 on numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from .. import __version__
from ..degrees import DegreeGuardError
from ..mapalg import ExponentOverflowError, MapSyntaxError
from ..numerics.rng import fresh_seed
from .commands import COMMANDS, NumericalFailure, add_arguments
from .config import ConfigError, read_config
from .output import dumps, envelope

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degdyn", description="Degree growth and equilibrium measures of rational maps.")
    parser.add_argument("--version", action="version", version=f"degdyn {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    for name, (handler, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="flat key = value file; flags given here override it")
        p.add_argument("--output", help="write the JSON document here instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="worker bound (output does not depend on it)")
        add_arguments(name, p)
        p.set_defaults(handler=handler)
    return parser


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _config_path(argv: list[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    """Parse ``argv`` with the config file's values as defaults (flags win)."""
    path = _config_path(argv)
    command = next((t for t in argv if t in COMMANDS), None)
    if path is not None and command is not None:
        values = read_config(path)
        sub = parser._subparsers._group_actions[0].choices[command]
        actions = {a.dest: a for a in sub._actions}
        for key, value in values.items():
            if key not in actions or key in ("config", "help"):
                raise ConfigError(f"unknown config key {key!r} for command {command!r}")
            a = actions[key]
            if isinstance(a, argparse._StoreTrueAction):
                v = value.lower()
                if v not in _TRUE | _FALSE:
                    raise ConfigError(f"config key {key!r} expects true or false")
                a.default = v in _TRUE
            else:
                a.default = value
            a.required = False
    return parser.parse_args(argv)


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -3:3:-2:2:400`` into ``--grid=-3:3:-2:2:400``, which argparse would reject."""
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if (len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")
                and prev.startswith("--") and "=" not in prev):
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        ns = _apply_config(parser, argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (_UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    config = {k: v for k, v in vars(ns).items() if k not in ("handler",)}
    if "seed" in config and config["seed"] is None:
        config["seed"] = ns.seed = fresh_seed()
    seed = config.get("seed")
    t0 = time.perf_counter()
    status = "ok"
    try:
        result, artifacts = ns.handler(ns)
    except (DegreeGuardError, ExponentOverflowError) as exc:
        print(f"error: guard violation: {exc}", file=stderr)
        return EXIT_INPUT
    except MapSyntaxError as exc:
        print(f"error: cannot parse map: {exc}", file=stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        result, artifacts, status = exc.result, exc.artifacts, "numerical-failure"
        print(f"error: numerical failure: {exc}", file=stderr)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    doc = envelope(ns.command, __version__, config, seed, time.perf_counter() - t0, result,
                   artifacts, status)
    text = dumps(doc)
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return EXIT_OK if status == "ok" else EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
