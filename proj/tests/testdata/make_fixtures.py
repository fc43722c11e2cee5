"""Regenerates the CSV fixtures under tests/testdata (deterministic)."""

import csv
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, header, rows, comments=()):
    with open(os.path.join(HERE, name), "w", newline="") as f:
        for c in comments:
            f.write(c + "\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def grouped(rng, layout, n_features):
    """layout: list of (group, count, positives)."""
    rows = []
    for group, count, positives in layout:
        labels = [1] * positives + [0] * (count - positives)
        for y in labels:
            x = [round(rng.gauss(0.8 * y, 1.0), 4) for _ in range(n_features)]
            rows.append(x + [group, y])
    rng.shuffle(rows)
    return rows


def main():
    rng = random.Random(20261017)
    # k = 2: group F has rate 0.3, group M has rate 0.6.
    write("binary_k2.csv", ["x1", "x2", "gender", "label"],
          grouped(rng, [("F", 100, 30), ("M", 100, 60)], 2))
    # k = 3 with unequal groups and rates.
    write("kary_k3.csv", ["x1", "x2", "race", "label"],
          grouped(rng, [("a", 90, 27), ("b", 60, 36), ("c", 50, 20)], 2))
    # Equal positive rates in every group.
    write("already_fair.csv", ["x1", "group", "label"],
          grouped(rng, [("g0", 40, 20), ("g1", 60, 30)], 1))
    # Tiny file for the ingestion round trip.
    write("tiny.csv", ["age", "color", "sex", "income"],
          [[25, "red", "F", ">50K"], [31.5, "blue", "M", "<=50K"],
           [40, "red", "M", ">50K"]],
          comments=["# three records"])
    # Adult-style schema sample.
    rows = []
    for _ in range(100):
        sex = rng.choice(["Male", "Male", "Female"])
        age = rng.randint(18, 75)
        workclass = rng.choice(["Private", "Self-emp", "Local-gov"])
        education = rng.choice(["HS-grad", "Bachelors", "Masters", "Some-college"])
        race = rng.choice(["White", "Black", "Asian-Pac-Islander", "Other"])
        hours = rng.randint(20, 60)
        p = 0.15 + (0.15 if sex == "Male" else 0.0) + (0.2 if education == "Masters" else 0.0)
        income = ">50K" if rng.random() < p else "<=50K"
        rows.append([age, workclass, education, sex, race, hours, income])
    write("adult_sample.csv",
          ["age", "workclass", "education", "sex", "race", "hours_per_week", "income"], rows)


if __name__ == "__main__":
    main()
