"""Command-line front end: ``primeset <command> [options]``.

Every command accepts the shared options (``--precision``, ``--eps``,
``--codebook``, ``--bit-cap``, ``--machine``, ``--config``). A config file is
a JSON object with the same keys (dashes or underscores); flags win.
Machine-readable output is ``key=value`` lines with stable keys.

Exit codes: 0 ok, 1 other error, 2 parse error, 3 unknown symbol,
4 unknown factor, 5 resource cap, 6 precision escalation failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import errors
from .bench import run_bench
from .codebook import PrimeCodebook
from .exact import DEFAULT_BIT_CAP, ExactCode, decode_exact, encode_exact
from .multiset import format_multiset_text, parse_multiset_text
from .pairs import (
    EpsKind,
    construct_integer_eps_collision,
    encode_pair,
    parse_epsilon,
    rational_eps_z_witness,
)
from .real import (
    DEFAULT_PRECISION,
    RealCode,
    aggregate,
    certified_distinct,
    format_radius,
    format_value,
    min_gap,
)
from .wl import load_graph, refine

log = logging.getLogger("primeset")

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_PARSE = 2
EXIT_UNKNOWN_SYMBOL = 3
EXIT_UNKNOWN_FACTOR = 4
EXIT_RESOURCE = 5
EXIT_PRECISION = 6


@dataclass
class CliConfig:
    precision_bits: int = DEFAULT_PRECISION
    eps: str = "sqrt2"
    codebook: Path | None = None
    bit_cap: int = DEFAULT_BIT_CAP
    machine: bool = False


_CONFIG_KEYS = {"precision": "precision_bits", "precision_bits": "precision_bits", "eps": "eps",
                "codebook": "codebook", "bit_cap": "bit_cap", "machine": "machine"}


def resolve_config(args: argparse.Namespace) -> CliConfig:
    cfg = CliConfig()
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise errors.ParseError(f"config file {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise errors.ParseError(f"config file {args.config}: expected a JSON object")
        for key, value in raw.items():
            attr = _CONFIG_KEYS.get(key.replace("-", "_"))
            if attr is None:
                raise errors.ParseError(f"config file {args.config}: unknown key {key!r}")
            setattr(cfg, attr, value)
    for flag, attr in (("precision", "precision_bits"), ("eps", "eps"), ("codebook", "codebook"),
                       ("bit_cap", "bit_cap")):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg, attr, value)
    if args.machine:
        cfg.machine = True
    if cfg.codebook is not None:
        cfg.codebook = Path(cfg.codebook)
    return cfg


# -- output helpers ------------------------------------------------------------

class Out:
    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []

    def field(self, key: str, human: str, value: object = None) -> None:
        if self.machine:
            self.lines.append(f"{key}={human if value is None else value}")
        else:
            self.lines.append(f"{key:<12} {human}")

    def real(self, key: str, r: RealCode) -> None:
        if self.machine:
            self.lines.append(f"{key}={format_value(r)}")
            self.lines.append(f"{key}_radius={format_radius(r.error_radius)}")
            self.lines.append(f"{key}_precision={r.precision_bits}")
        else:
            self.field(key, f"{r} ({r.precision_bits} bits)")

    def text(self, line: str) -> None:
        self.lines.append(line)

    def flush(self) -> None:
        for line in self.lines:
            print(line)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _open_codebook(cfg: CliConfig, *, must_exist: bool = False) -> PrimeCodebook:
    if cfg.codebook is not None and cfg.codebook.exists():
        return PrimeCodebook.load(cfg.codebook)
    if must_exist:
        raise errors.UnknownSymbolError(
            "this command needs an existing --codebook" if cfg.codebook is None
            else f"codebook {cfg.codebook} does not exist"
        )
    return PrimeCodebook()


def _persist(cb: PrimeCodebook, cfg: CliConfig, before: int) -> None:
    if cfg.codebook is not None and (len(cb) != before or not cfg.codebook.exists()):
        cb.save(cfg.codebook)
        log.debug("saved %d symbols to %s", len(cb), cfg.codebook)


# -- commands ------------------------------------------------------------------

def cmd_encode(args, cfg: CliConfig, out: Out) -> None:
    counts = parse_multiset_text(_read_text(args.file))
    cb = _open_codebook(cfg)
    before = len(cb)
    X = cb.multiset(counts)
    code = encode_exact(cb, X, bit_cap=cfg.bit_cap)
    out.field("exact", code.hex())
    out.real("real", aggregate(cb, X, cfg.precision_bits))
    _persist(cb, cfg, before)


def cmd_decode(args, cfg: CliConfig, out: Out) -> None:
    cb = _open_codebook(cfg, must_exist=True)
    X = decode_exact(cb, ExactCode.from_hex(args.code))
    out.text(format_multiset_text(cb.symbol_counts(X)).rstrip("\n"))


def cmd_encode_pair(args, cfg: CliConfig, out: Out) -> None:
    counts = parse_multiset_text(_read_text(args.file))
    eps = parse_epsilon(cfg.eps)
    cb = _open_codebook(cfg)
    before = len(cb)
    cb.intern_many([*counts, args.center], sort=True)
    X = cb.multiset(counts)
    code = encode_pair(cb, eps, cb.id_of(args.center), X, cfg.precision_bits, bit_cap=cfg.bit_cap)
    out.field("eps", str(eps))
    out.field("eps_safety", eps.safety().value)
    out.field("center", str(code.center_prime))
    out.field("exact", code.multiset_code.hex())
    out.real("real", code.real_value)
    _persist(cb, cfg, before)


def cmd_eps_check(args, cfg: CliConfig, out: Out) -> None:
    eps = parse_epsilon(args.value)
    out.field("eps", str(eps))
    out.field("safety", eps.safety().value)
    if eps.kind is EpsKind.RATIONAL:
        w = rational_eps_z_witness(eps.fraction)
        out.field("p", str(w.p))
        out.field("q", str(w.q))
        out.field("identity", w.identity())
        out.field("verified", "yes" if w.verify() else "no", str(w.verify()).lower())
    elif eps.kind is EpsKind.SQRT2:
        out.field("reason", "q^sqrt2 is transcendental for rational q not in {0,1} (Gelfond-Schneider)")
    else:
        out.field("reason", "membership in the excluded set is not decidable for this value")


def cmd_collide(args, cfg: CliConfig, out: Out) -> None:
    eps = parse_epsilon(cfg.eps)
    if eps.kind is not EpsKind.RATIONAL or eps.denominator != 1 or eps.numerator == 0:
        raise errors.ParseError(f"collide needs a nonzero integer --eps, got {cfg.eps!r}")
    k = eps.numerator
    cb = _open_codebook(cfg)
    before = len(cb)
    for sym in ("a", "b"):
        if len(cb) >= 2:
            break
        cb.intern(sym)
    col = construct_integer_eps_collision(cb, k)
    a = encode_pair(cb, eps, col.c1, col.X1, cfg.precision_bits)
    b = encode_pair(cb, eps, col.c2, col.X2, cfg.precision_bits)
    for tag, c, X, product, pc in (("1", col.c1, col.X1, col.lhs, a), ("2", col.c2, col.X2, col.rhs, b)):
        body = " ".join(f"{s}:{m}" for s, m in cb.symbol_counts(X))
        out.field(f"center{tag}", cb.symbol(c))
        out.field(f"multiset{tag}", "{" + body + "}")
        out.field(f"product{tag}", str(product))
        out.real(f"real{tag}", pc.real_value)
    out.field("exact_equal", "yes" if col.lhs == col.rhs else "no", str(col.lhs == col.rhs).lower())
    # real values alone; the symbolic parts always differ here
    out.field("real_verdict", certified_distinct(a.real_value, b.real_value).value)
    _persist(cb, cfg, before)


def cmd_wl_hash(args, cfg: CliConfig, out: Out) -> None:
    cb = _open_codebook(cfg)
    before = len(cb)
    for path in args.files:
        state = refine(load_graph(path), cb, args.max_rounds, bit_cap=cfg.bit_cap)
        fp = state.history[-1].hex()
        if out.machine:
            out.text(f"file={path}")
            out.text(f"fingerprint={fp}")
            out.text(f"rounds={state.round}")
        else:
            out.text(f"{fp} rounds={state.round} {path}")
    _persist(cb, cfg, before)


def cmd_wl_compare(args, cfg: CliConfig, out: Out) -> None:
    cb = _open_codebook(cfg)
    before = len(cb)
    fps = [refine(load_graph(p), cb, bit_cap=cfg.bit_cap).history[-1] for p in (args.first, args.second)]
    verdict = "distinguishable" if fps[0] != fps[1] else "not-distinguished-by-1-WL"
    out.field("result", verdict)
    _persist(cb, cfg, before)


def cmd_min_gap(args, cfg: CliConfig, out: Out) -> None:
    if cfg.codebook is not None and cfg.codebook.exists():
        cb = PrimeCodebook.load(cfg.codebook)
        if len(cb) < args.alphabet:
            raise errors.UnknownIdError(f"codebook has {len(cb)} symbols, need {args.alphabet}")
    else:
        cb = PrimeCodebook([f"x{i}" for i in range(args.alphabet)])
    res = min_gap(cb, args.alphabet, args.max_size, cfg.precision_bits, max_precision=args.max_precision)
    out.real("gap", res.gap)
    for tag, X in zip("12", res.witness):
        out.field(f"witness{tag}", "{" + " ".join(f"{s}:{m}" for s, m in cb.symbol_counts(X)) + "}")
    out.field("precision", str(res.precision_bits))


def cmd_bench(args, cfg: CliConfig, out: Out) -> None:
    cb = _open_codebook(cfg)
    before = len(cb)
    results = run_bench(cb, seed=args.seed, batch=args.batch, bit_cap=cfg.bit_cap)
    for key, value in results.items():
        text = f"{value:.1f}" if isinstance(value, float) else str(value)
        if out.machine:
            out.field(key, text)
        else:
            out.text(f"{key:<28} {text}")
    _persist(cb, cfg, before)


# -- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in bits (default 53)")
    common.add_argument("--eps", help="epsilon: sqrt2 (default), a rational like 3/2, pi, e")
    common.add_argument("--codebook", type=Path, help="codebook file; created when absent")
    common.add_argument("--bit-cap", type=int, help="max bit length of exact codes (default 1000000)")
    common.add_argument("--machine", action="store_true", help="key=value output")
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="primeset", description="Injective multiset codes via prime products.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="exact and real code of a multiset file")
    p.add_argument("file", help="multiset file ('-' for stdin)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="multiset for a hex code")
    p.add_argument("code")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("encode-pair", parents=[common], help="code of a (center, multiset) pair")
    p.add_argument("file")
    p.add_argument("--center", required=True)
    p.set_defaults(func=cmd_encode_pair)

    p = sub.add_parser("eps-check", parents=[common], help="is this epsilon excluded?")
    p.add_argument("value", metavar="EPS")
    p.set_defaults(func=cmd_eps_check)

    p = sub.add_parser("collide", parents=[common], help="colliding pairs for an integer epsilon")
    p.set_defaults(func=cmd_collide)

    p = sub.add_parser("wl-hash", parents=[common], help="1-WL fingerprints of graph files")
    p.add_argument("files", nargs="+")
    p.add_argument("--max-rounds", type=int)
    p.set_defaults(func=cmd_wl_hash)

    p = sub.add_parser("wl-compare", parents=[common], help="does 1-WL tell two graphs apart?")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_wl_compare)

    p = sub.add_parser("min-gap", parents=[common], help="certified minimum log-sum gap")
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--max-precision", type=int, default=4096, help="escalation cap in bits")
    p.set_defaults(func=cmd_min_gap)

    p = sub.add_parser("bench", parents=[common], help="throughput table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch", type=int, default=200)
    p.set_defaults(func=cmd_bench)
    return parser


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, errors.UnknownFactorError):
        return EXIT_UNKNOWN_FACTOR
    if isinstance(exc, (errors.UnknownSymbolError, errors.UnknownIdError)):
        return EXIT_UNKNOWN_SYMBOL
    if isinstance(exc, errors.ResourceLimitError):
        return EXIT_RESOURCE
    if isinstance(exc, errors.PrecisionEscalationError):
        return EXIT_PRECISION
    if isinstance(exc, (errors.ParseError, errors.InvalidMultiplicityError, ValueError)):
        return EXIT_PARSE
    return EXIT_OTHER


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        out = Out(cfg.machine)
        args.func(args, cfg, out)
    except (errors.PrimesetError, ValueError, OSError) as exc:
        print(f"primeset {args.command}: error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    out.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
