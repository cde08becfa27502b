"""Command-line front end for FER sweeps.

Example:
    qarylp-sim --decoder soft --kappa 100 --ebno 2.0,2.5,3.0 \
        --target-errors 50 --max-frames 20000 --seed 1 --out fer.csv
"""

from __future__ import annotations

import argparse
import sys

from .simulate import SimConfig, run_sweep


def _parse_ebno(text: str):
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--ebno expects comma-separated numbers, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("--ebno list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qarylp-sim",
        description="Monte-Carlo FER sweeps for LP decoding over Z_q.",
    )
    p.add_argument("--code", default="builtin",
                   help="code source: 'builtin' or 'file:PATH' (default: builtin)")
    p.add_argument("--decoder", choices=("soft", "hard", "lp"),
                   default="soft",
                   help="coordinate ascent (soft/hard) or exact LP baseline")
    p.add_argument("--kappa", type=float, default=100.0,
                   help="soft-min sharpness for the soft decoder")
    p.add_argument("--ebno", type=_parse_ebno, required=True,
                   help="comma-separated Eb/N0 points in dB")
    p.add_argument("--target-errors", type=int, default=500,
                   help="frame errors collected per point (default: 500)")
    p.add_argument("--max-frames", type=int, default=1_000_000,
                   help="frame budget per point")
    p.add_argument("--max-iters", type=int, default=100,
                   help="decoder iteration cap per frame")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None, metavar="PATH",
                   help="CSV output path (omit to skip the file)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel frame workers (results are identical)")
    p.add_argument("--random-codeword", default=None, metavar="PATH",
                   help="transmit codewords sampled from this list instead "
                        "of the all-zero word")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock times (breaks byte-for-byte "
                        "output reproducibility)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = SimConfig(
            code=args.code,
            decoder=args.decoder,
            kappa=args.kappa,
            ebno_list=args.ebno,
            target_frame_errors=args.target_errors,
            max_frames=args.max_frames,
            max_iterations=args.max_iters,
            seed=args.seed,
            output=args.out,
            random_codewords=args.random_codeword,
            workers=args.workers,
            record_timing=args.timing,
        )
        run_sweep(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
