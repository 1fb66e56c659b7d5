"""
Command line front end.

    uwofdm matrices --config F [--out-dir D]
    uwofdm energy   --config F --uw SPEC [--uw SPEC ...]
    uwofdm ber      --config F --uw SPEC --approach A --ebn0 LO:HI:STEP [--taps F]
                    [--seed S] [--min-errors K] [--max-bits M] [--out F.csv]
    uwofdm sequence --kind zadoff-chu --length L --root R [--out F]

UW specs: ``zero``, ``zc:ROOT`` (or ``zadoff-chu:ROOT``), ``file:PATH``.
Exit codes: 0 ok, 1 validation error, 2 numerical failure, 3 I/O error.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .channel import ChannelError, identity_channel, load_taps
from .config import ConfigError, default_80211a_like, load_config
from .energy import db_shift, energy_direct, energy_two_step
from .generator import ZeroWordError, build_generator
from .linalg import SingularMatrixError
from .sequences import (
    SequenceError,
    format_sequence,
    parse_sequence_spec,
    scale_to_fraction,
    zadoff_chu,
    zero_word,
)
from .simulation import APPROACHES, SweepSpec, emit_csv, run_sweep

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def _config(args):
    return load_config(args.config) if args.config else default_80211a_like()


def _ebn0_range(text):
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("need STEP > 0 and HI >= LO")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(round(lo + i * step, 10) for i in range(count))


def _write_matrix(path, m):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (i, j), z in np.ndenumerate(m):
            w.writerow([i, j, repr(float(z.real)), repr(float(z.imag))])


def cmd_matrices(args, out):
    cfg = _config(args)
    gen = build_generator(cfg)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["quantity", "value"])
    w.writerow(["n_total", cfg.n_total])
    w.writerow(["n_uw", cfg.n_uw])
    w.writerow(["n_data", cfg.n_data])
    w.writerow(["m22_condition", repr(gen.m22_condition)])
    w.writerow(["trace_tth", repr(gen.trace_tth)])
    w.writerow(["e_r", repr(cfg.sigma2_d * gen.trace_tth / cfg.n_total)])
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        _write_matrix(d / "t_matrix.csv", gen.t_matrix)
        _write_matrix(d / "g_matrix.csv", gen.g_matrix)
        _write_matrix(d / "m22.csv", gen.m22)


def cmd_energy(args, out):
    cfg = _config(args)
    gen = build_generator(cfg)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["label", "approach", "e_d", "e_r", "e_u", "e_total", "excess", "db_vs_two_step"])
    for text in args.uw or ["zero"]:
        uw = parse_sequence_spec(text, cfg.n_uw).build()
        if uw.energy > 0 and not args.no_scale:
            base = energy_two_step(gen, cfg, zero_word(cfg.n_uw))
            uw = scale_to_fraction(uw, cfg, base.e_d + base.e_r)
        two = energy_two_step(gen, cfg, uw)
        for e in (two, energy_direct(gen, cfg, uw)):
            w.writerow([uw.label, e.approach] +
                       [f"{v:.10g}" for v in (e.e_d, e.e_r, e.e_u, e.e_total, e.excess)] +
                       [f"{db_shift(e.e_total, two.e_total):.6f}"])


def cmd_ber(args, out):
    cfg = _config(args)
    taps = load_taps(args.taps) if args.taps else identity_channel()
    approaches = tuple(a.strip().replace("-", "_") for a in args.approach.split(","))
    uws = tuple(parse_sequence_spec(t, cfg.n_uw) for t in (args.uw or ["zero"]))
    spec = SweepSpec(args.ebn0, approaches, uws, taps, args.min_errors, args.max_bits,
                     args.seed, args.order, workers=args.workers,
                     cp_count_overhead=not args.cp_plain)
    points = run_sweep(spec, cfg)
    if args.out:
        emit_csv(points, args.out)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["ebn0_db", "approach", "uw_label", "bits", "errors", "ber"])
        for p in points:
            w.writerow([p.ebn0_db, p.approach, p.uw_label, p.bits_simulated, p.bit_errors, p.ber])


def cmd_sequence(args, out):
    kind = args.kind.replace("_", "-")
    if kind == "zadoff-chu":
        uw = zadoff_chu(args.length, args.root)
    else:
        uw = zero_word(args.length)
    text = format_sequence(uw)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        out.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are validation errors; exit code 2 is reserved for numerics
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log one line per BER point")
    parser = _Parser(prog="uwofdm", description="UW-OFDM simulation tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("matrices", parents=[common], help="generator matrix statistics as CSV")
    p.add_argument("--config")
    p.add_argument("--out-dir", help="also write T, G and M22 entries here")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("energy", parents=[common], help="symbol energy breakdown per UW and approach")
    p.add_argument("--config")
    p.add_argument("--uw", action="append", help="UW spec, repeatable")
    p.add_argument("--no-scale", action="store_true",
                   help="use UWs as given instead of scaling to uw_energy_fraction")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("ber", parents=[common], help="Monte Carlo BER sweep")
    p.add_argument("--config")
    p.add_argument("--uw", action="append", help="UW spec, repeatable")
    p.add_argument("--approach", default="two_step",
                   help=f"comma-separated subset of {', '.join(APPROACHES)}")
    p.add_argument("--ebn0", type=_ebn0_range, required=True, help="LO:HI:STEP in dB")
    p.add_argument("--taps", help="channel tap file (default: AWGN)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-errors", type=int, default=1000)
    p.add_argument("--max-bits", type=int, default=10**6)
    p.add_argument("--order", type=int, default=4, choices=(4, 16))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cp-plain", action="store_true",
                   help="exclude pilot and CP energy from the CP reference Eb")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("sequence", parents=[common], help="emit a sequence file")
    p.add_argument("--kind", default="zadoff-chu", choices=("zadoff-chu", "zadoff_chu", "zero"))
    p.add_argument("--length", type=int, default=16)
    p.add_argument("--root", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sequence)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        args.func(args, out)
    except (ConfigError, SequenceError, ChannelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SingularMatrixError, ZeroWordError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
