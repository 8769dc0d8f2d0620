#!/usr/bin/env python3
"""Download PJM 2021 hourly solar, wind, nuclear and load into data/pjm2021/.

Needs a Data Miner 2 subscription key in PJM_API_KEY. Each output file has
`timestamp,value` columns, one row per UTC hour, in MW.
"""

import argparse
import csv
import os
import sys
from collections import defaultdict
from pathlib import Path

import requests

BASE = "https://api.pjm.com/api/v1"
RANGE = "2021-01-01 00:00to2021-12-31 23:00"
PAGE = 50000
FUELS = {"solar": "Solar", "wind": "Wind", "nuclear": "Nuclear"}


def fetch(feed, params, key):
    rows, start = [], 1
    while True:
        q = dict(params, startRow=start, rowCount=PAGE)
        r = requests.get(f"{BASE}/{feed}", params=q, headers={"Ocp-Apim-Subscription-Key": key}, timeout=120)
        r.raise_for_status()
        items = r.json().get("items", [])
        rows.extend(items)
        if len(items) < PAGE:
            return rows
        start += PAGE


def hourly(rows, value="mw"):
    totals = defaultdict(float)
    for row in rows:
        totals[row["datetime_beginning_utc"]] += float(row[value])
    return sorted(totals.items())


def write(path, series):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["timestamp", "value"])
        w.writerows(series)
    print(f"{path}: {len(series)} hours", file=sys.stderr)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "pjm2021")
    args = ap.parse_args()
    key = os.environ.get("PJM_API_KEY")
    if not key:
        sys.exit("set PJM_API_KEY to a Data Miner 2 subscription key")
    args.out.mkdir(parents=True, exist_ok=True)

    fields = "datetime_beginning_utc,fuel_type,mw"
    for name, fuel in FUELS.items():
        rows = fetch("gen_by_fuel", {"datetime_beginning_utc": RANGE, "fuel_type": fuel, "fields": fields}, key)
        write(args.out / f"{name}.csv", hourly(rows))

    rows = fetch("hrl_load_metered", {"datetime_beginning_utc": RANGE, "fields": "datetime_beginning_utc,load_area,mw"}, key)
    write(args.out / "load.csv", hourly(rows))


if __name__ == "__main__":
    main()
