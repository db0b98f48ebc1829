"""Convert Maass eigenform coefficients into the rankin data format.

Genuine coefficients (for example an LMFDB Maass form export) have to be downloaded by
hand; this script does no network access. Give it a whitespace or comma separated text
file of a_1, a_2, ... and the spectral parameter R:

    python3 scripts/fetch_maass_data.py coeffs.txt --R 9.53369526 --source "..." -o form.json

The output validates through MaassFormData before it is written, so a_1 = 1, at least 50
coefficients and parity "even" are all enforced.
"""

import argparse
import re
import sys

from rankin.automorphic_pipeline import MaassFormData
from rankin.errors import DataValidationError


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("coeffs", help="text file with a_1, a_2, ... in order")
    p.add_argument("--R", type=float, required=True, help="spectral parameter, lambda = 1/4 + R^2")
    p.add_argument("--source", required=True, help="where the coefficients came from")
    p.add_argument("--normalize", action="store_true", help="divide through by a_1")
    p.add_argument("-o", "--output", required=True)
    args = p.parse_args(argv)

    with open(args.coeffs) as fh:
        coeffs = [float(x) for x in re.split(r"[\s,]+", fh.read().strip()) if x]
    if args.normalize and coeffs:
        coeffs = [c / coeffs[0] for c in coeffs]
    try:
        form = MaassFormData(args.R, tuple(coeffs), parity="even", source=args.source)
    except DataValidationError as exc:
        print(f"invalid coefficients: {exc}", file=sys.stderr)
        return 2
    with open(args.output, "w") as fh:
        fh.write(form.to_json())
    print(f"wrote {args.output}: R = {form.R}, {form.M} coefficients")
    return 0


if __name__ == "__main__":
    sys.exit(main())
