import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { DataError } from "../src/csv.js";
import { refinePeak, render } from "../src/figures.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const FIXTURES = path.join(here, "fixtures");

const CASES: Array<[string, string]> = [
  ["fig1", "fig1"],
  ["chi-z", "chi-z"],
  ["fig2", "fig2"],
  ["fig3", "fig3"],
  ["fig4", "fig4"],
  ["fs-lin-n", "fs"],
  ["fs-xi", "fs"],
  ["low-omega", "low-omega"],
];

describe("figure rendering", () => {
  for (const [figure, fixture] of CASES) {
    it(`renders ${figure} deterministically`, () => {
      const dir = path.join(FIXTURES, fixture);
      const first = render(figure, dir);
      const second = render(figure, dir);
      expect(first.startsWith("<svg")).toBe(true);
      expect(first.trimEnd().endsWith("</svg>")).toBe(true);
      expect(second).toBe(first);  // identical bytes on identical inputs
      expect(first).toContain("<polyline");
    });
  }

  it("rejects unknown figure ids with the available list", () => {
    expect(() => render("fig99", path.join(FIXTURES, "fig1")))
      .toThrow(/unknown figure.*fig1/);
  });

  it("fails loudly when a required column is missing", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "figcol-"));
    const src = path.join(FIXTURES, "fig1");
    const lines = fs.readFileSync(path.join(src, "observables.csv"), "utf-8")
      .split("\n");
    const dropped = lines.map((line) => line.split(",").slice(0, 7).join(","));
    fs.writeFileSync(path.join(dir, "observables.csv"), dropped.join("\n"));
    fs.copyFileSync(path.join(src, "analysis.json"), path.join(dir, "analysis.json"));
    expect(() => render("fig1", dir)).toThrow(/missing required columns:.*value/);
  });

  it("fails loudly on an empty CSV and writes no image", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "figempty-"));
    fs.writeFileSync(path.join(dir, "observables.csv"),
                     "kind,N,gamma,h,dh,omega,n,value,value_k_index,value_k\n");
    fs.writeFileSync(path.join(dir, "analysis.json"), "{}");
    expect(() => render("fig1", dir)).toThrow(DataError);
  });

  it("reports absent analysis content", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "figan-"));
    fs.copyFileSync(path.join(FIXTURES, "fig1", "observables.csv"),
                    path.join(dir, "observables.csv"));
    fs.writeFileSync(path.join(dir, "analysis.json"), "{}");
    expect(() => render("fig1", dir)).toThrow(/per-n/);
  });
});

describe("refinePeak", () => {
  it("finds the exact vertex of a parabola", () => {
    const pts: Array<[number, number]> = [];
    for (let i = 0; i <= 20; i += 1) {
      const h = 0.9 + 0.01 * i;
      pts.push([h, 5 - 80 * (h - 1.003) ** 2]);
    }
    const peak = refinePeak(pts);
    expect(peak.h).toBeCloseTo(1.003, 10);
    expect(peak.value).toBeCloseTo(5.0, 10);
  });

  it("rejects boundary maxima", () => {
    const pts: Array<[number, number]> = [[0, 0], [1, 1], [2, 2]];
    expect(() => refinePeak(pts)).toThrow(/boundary/);
  });
});
