# The MIT License
# Copyright 2019 Innodata Labs
#
import json
from gatedelay.compare import compare, agreement_view


if __name__ == '__main__':
    import argparse

    parser = argparse.ArgumentParser(description='Compares two JSON report files')
    parser.add_argument('report1', help='Path to first report file')
    parser.add_argument('report2', help='Path to second report file')
    parser.add_argument('--with-witnesses', action='store_true', default=False,
                        help='Compare witnesses too (they may legitimately differ between deciders), default %(default)s')

    args = parser.parse_args()

    with open(args.report1, 'r', encoding='utf-8') as f1:
        r1 = json.load(f1)
    with open(args.report2, 'r', encoding='utf-8') as f2:
        r2 = json.load(f2)

    if not args.with_witnesses:
        r1 = agreement_view(r1)
        r2 = agreement_view(r2)

    mismatch = compare(r1, r2)
    if mismatch is not None:
        error, path = mismatch
        print(error, 'at', path or '/')
    else:
        print('Reports agree')
    parser.exit(1 if mismatch else 0)
