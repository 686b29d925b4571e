"""Command-line front end: embed, extract, info, psnr, bench, fixtures."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import bitstream as bs
from .bench import DEFAULT_SEED, run_bench, write_csv
from .codec import decode_header, embed, extract
from .errors import RdhError
from .fixtures import STANDARD_NAMES, synthetic_image
from .image_io import load_pgm, psnr, save_pgm
from .lattice import margin_indices


def _load(path: str):
    return load_pgm(Path(path).read_bytes())


def _cmd_embed(args) -> int:
    cover = _load(args.cover)
    secret = bs.bits_from_bytes(Path(args.data).read_bytes())
    result = embed(cover, secret, passes=args.passes, step=args.step, key=args.key)
    Path(args.out).write_bytes(save_pgm(result.marked))
    print(f"embedded {secret.size} bits in {args.passes} pass(es), psnr {result.psnr_db:.2f} dB")
    return 0


def _cmd_extract(args) -> int:
    marked = _load(args.marked)
    secret, recovered = extract(marked, key=args.key)
    Path(args.out).write_bytes(save_pgm(recovered))
    Path(args.data).write_bytes(bs.bytes_from_bits(secret))
    print(f"extracted {secret.size} bits")
    return 0


def _cmd_info(args) -> int:
    img = _load(args.image)
    margins = margin_indices(img.height, img.width)[:158]  # longest header form
    header = decode_header((img.pixels.reshape(-1)[margins] & 1).astype("uint8"))
    print(f"passes: {header.pass_count}")
    for idx, (params, count) in enumerate(zip(header.pass_params, header.pass_bits), 1):
        print(
            f"pass {idx}: lp={params.lp} lz={params.lz} rp={params.rp} rz={params.rz}"
            f" bits={count}"
        )
    return 0


def _cmd_psnr(args) -> int:
    value = psnr(_load(args.image_a), _load(args.image_b))
    print("inf" if math.isinf(value) else f"{value:.4f}")
    return 0


def _cmd_bench(args) -> int:
    images = [(Path(p).stem, _load(p)) for p in args.images]
    payloads = sorted(int(p) for p in args.payloads.split(","))
    rows = run_bench(
        images, payloads, passes=args.passes, step=args.step, seed=args.seed,
        save_dir=args.save_dir,
    )
    if args.out:
        with open(args.out, "w") as fh:
            write_csv(rows, fh, seed=args.seed)
    else:
        write_csv(rows, sys.stdout, seed=args.seed)
    return 0


def _cmd_fixtures(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in STANDARD_NAMES:
        path = out_dir / f"{name}.pgm"
        path.write_bytes(save_pgm(synthetic_image(name, args.size)))
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppe-rdh",
        description="Reversible data hiding in 8-bit grayscale PGM images",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a payload file into a cover image")
    p.add_argument("--cover", required=True)
    p.add_argument("--data", required=True, help="payload file, embedded as raw bits")
    p.add_argument("--out", required=True, help="marked PGM output path")
    p.add_argument("--passes", type=int, default=2, choices=(1, 2))
    p.add_argument("--step", type=int, default=None, help="selection prefix step")
    p.add_argument("--key", type=int, default=None, help="optional scrambling key")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("extract", help="recover the payload and original image")
    p.add_argument("--marked", required=True)
    p.add_argument("--out", required=True, help="recovered PGM output path")
    p.add_argument("--data", required=True, help="recovered payload output path")
    p.add_argument("--key", type=int, default=None)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("info", help="print the embedded header of a marked image")
    p.add_argument("image")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("psnr", help="PSNR between two images, in dB")
    p.add_argument("image_a")
    p.add_argument("image_b")
    p.set_defaults(func=_cmd_psnr)

    p = sub.add_parser("bench", help="payload-distortion sweep, CSV output")
    p.add_argument("--images", nargs="+", required=True)
    p.add_argument("--payloads", required=True, help="comma-separated bit counts")
    p.add_argument("--passes", type=int, default=2, choices=(1, 2))
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--save-dir", default=None, help="keep marked images here")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("fixtures", help="write the synthetic standard test images")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--size", type=int, default=512)
    p.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RdhError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
