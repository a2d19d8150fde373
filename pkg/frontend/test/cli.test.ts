import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const FIXTURES = path.join(here, "fixtures");

describe("cli", () => {
  it("renders a figure to the requested path", () => {
    const out = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "cli-")), "fig1.svg");
    const code = main(["render", "--figure", "fig1",
                       "--in", path.join(FIXTURES, "fig1"), "--out", out]);
    expect(code).toBe(0);
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("lists available figures", () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    expect(main(["list"])).toBe(0);
    const names = log.mock.calls.map((c) => c[0]);
    expect(names).toContain("fig1");
    expect(names).toContain("fig4");
    log.mockRestore();
  });

  it("returns 2 on usage errors", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main([])).toBe(2);
    expect(main(["render", "--figure", "fig1"])).toBe(2);
    expect(main(["render", "--figure"])).toBe(2);
    err.mockRestore();
  });

  it("returns 1 and writes nothing on data errors", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const out = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "cli-")), "x.svg");
    const code = main(["render", "--figure", "fig1", "--in", "/nonexistent", "--out", out]);
    expect(code).toBe(1);
    expect(fs.existsSync(out)).toBe(false);
    err.mockRestore();
  });

  it("rejects unknown figures with exit 1 and a helpful message", () => {
    const messages: string[] = [];
    const err = vi.spyOn(console, "error").mockImplementation((m) => {
      messages.push(String(m));
    });
    const out = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "cli-")), "x.svg");
    const code = main(["render", "--figure", "nope",
                       "--in", path.join(FIXTURES, "fig1"), "--out", out]);
    expect(code).toBe(1);
    expect(messages.join(" ")).toMatch(/unknown figure/);
    err.mockRestore();
  });
});
