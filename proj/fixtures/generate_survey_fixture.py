#!/usr/bin/env python3
"""Builds fixtures/survey_50.csv: 50 constructed survey rows whose aggregates
reproduce the published usability percentages, failed-attempt totals and
solve-time means. See fixtures/README.md for every denominator choice."""

import csv
import random
import sys
from pathlib import Path

LABELS = ["collage", "flash", "gimpy", "math", "pessimal", "question", "scattertype"]
METRICS = ["learnability", "efficiency", "memorability", "satisfaction"]

# (easy count, difficult count, respondents) per (label, metric).
CELLS = {
    "learnability": {
        "flash": (44, 1, 45), "collage": (36, 3, 45), "question": (27, 4, 45),
        "gimpy": (23, 11, 45), "pessimal": (20, 17, 45), "scattertype": (12, 16, 45),
        "math": (9, 33, 45),
    },
    "efficiency": {
        "flash": (43, 1, 45), "collage": (34, 0, 45), "question": (31, 4, 45),
        "gimpy": (29, 5, 45), "pessimal": (21, 17, 45), "scattertype": (16, 13, 45),
        "math": (7, 33, 45),
    },
    "memorability": {
        "flash": (43, 1, 45), "collage": (32, 5, 45), "question": (29, 6, 44),
        "pessimal": (20, 17, 45), "gimpy": (17, 16, 45), "scattertype": (13, 18, 45),
        "math": (10, 30, 45),
    },
    "satisfaction": {
        "flash": (41, 1, 45), "collage": (30, 4, 45), "question": (29, 8, 44),
        "gimpy": (16, 15, 45), "pessimal": (15, 21, 45), "scattertype": (9, 22, 45),
        "math": (6, 34, 45),
    },
}

FAILED_TOTALS = {"pessimal": 64, "scattertype": 54, "question": 35, "gimpy": 34,
                 "collage": 6, "flash": 1}

N = 50
FREQUENCIES = ["daily"] * 34 + ["weekly"] * 9 + ["monthly"] * 7
EDUCATION = (["primary"] * 11 + ["preparatory"] * 3 + ["secondary"] * 8 +
             ["diploma"] * 4 + ["bachelor"] * 16 + ["master"] * 7 + ["phd"] * 1)
# Table of internet-experience bins: 18 / 13 / 10 / 9 participants.
YEAR_BINS = [((1, 5), 18), ((6, 10), 13), ((11, 15), 10), ((16, 21), 9)]
YEARS_TOTAL = 478        # mean 9.56 over 50
AGE_TOTAL = 1085         # mean 21.7 over 50, range 8..48
TIME_TOTALS = {"weekly": 9 * 10800, "monthly": 7 * 9000}
TIME_OVERALL = 50 * 9500


def fix_sum(values, target, lo, hi, rng):
    """Nudges values inside [lo, hi] until they sum to target."""
    values = list(values)
    while sum(values) != target:
        i = rng.randrange(len(values))
        step = 1 if sum(values) < target else -1
        if lo <= values[i] + step <= hi:
            values[i] += step
    return values


def ratings_for(easy, difficult, n, rng):
    vals = [1 + (i % 2) for i in range(difficult)]
    vals += [3] * (n - easy - difficult)
    vals += [4 + (i % 2) for i in range(easy)]
    rng.shuffle(vals)
    return vals


def split_total(total, parts, rng):
    counts = [0] * parts
    for _ in range(total):
        counts[rng.randrange(parts)] += 1
    return counts


def main(out_path):
    rng = random.Random(20180601)

    years = []
    for (lo, hi), count in YEAR_BINS:
        years += [rng.randint(lo, hi) for _ in range(count)]
    years[0], years[-1] = 1, 21
    # Adjust inside each bin so the table counts stay intact.
    offsets = [0, 18, 31, 41, 50]
    while sum(years) != YEARS_TOTAL:
        b = rng.randrange(4)
        i = rng.randrange(offsets[b], offsets[b + 1])
        if i in (0, N - 1):
            continue
        (lo, hi), _ = YEAR_BINS[b]
        step = 1 if sum(years) < YEARS_TOTAL else -1
        if lo <= years[i] + step <= hi:
            years[i] += step

    ages = [rng.randint(12, 35) for _ in range(N)]
    ages[0], ages[1] = 8, 48
    ages = ages[:2] + fix_sum(ages[2:], AGE_TOTAL - 56, 9, 47, rng)

    freq = list(FREQUENCIES)
    rng.shuffle(freq)
    edu = list(EDUCATION)
    rng.shuffle(edu)
    gender = ["female", "male"] * 25
    vision = [False] * N
    for i in rng.sample(range(N), 4):
        vision[i] = True

    times = [0] * N
    for group in ("weekly", "monthly", "daily"):
        idx = [i for i in range(N) if freq[i] == group]
        target = TIME_TOTALS.get(group, TIME_OVERALL - sum(TIME_TOTALS.values()))
        base = [rng.randint(5000, 15000) for _ in idx]
        base = fix_sum(base, target, 3000, 30000, rng)
        for i, t in zip(idx, base):
            times[i] = t

    # Respondents 0..44 answered the rating items; 44 skipped two question-based
    # items (denominator 44), 45..49 skipped every rating item.
    ratings = {}
    for metric in METRICS:
        for label in LABELS:
            easy, difficult, n = CELLS[metric][label]
            ratings[(label, metric)] = ratings_for(easy, difficult, n, rng)

    failed = {label: split_total(total, N, rng) for label, total in FAILED_TOTALS.items()}

    header = ["participant_id", "age", "gender", "education", "internet_years",
              "internet_frequency", "vision_impaired", "flash_solve_time_ms"]
    header += [f"{l}.{m}" for l in LABELS for m in METRICS]
    header += [f"{l}.failed_attempts" for l in LABELS if l in FAILED_TOTALS]

    with open(out_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for i in range(N):
            row = [f"p{i + 1:02d}", ages[i], gender[i], edu[i], years[i], freq[i],
                   "yes" if vision[i] else "no", times[i]]
            for l in LABELS:
                for m in METRICS:
                    vals = ratings[(l, m)]
                    row.append(vals[i] if i < len(vals) else "")
            row += [failed[l][i] for l in LABELS if l in FAILED_TOTALS]
            w.writerow(row)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("survey_50.csv"))
