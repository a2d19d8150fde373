#!/usr/bin/env node
/**
 * Figure renderer CLI:
 *
 *   floqxy-figures render --figure fig1 --in results/fig1 --out fig1.svg
 *   floqxy-figures list
 */

import fs from "node:fs";
import path from "node:path";

import { DataError } from "./csv.js";
import { FIGURES, render } from "./figures.js";

function usage(): string {
  return [
    "usage: floqxy-figures render --figure ID --in DIR --out PATH",
    "       floqxy-figures list",
    `figures: ${Object.keys(FIGURES).sort().join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === "list") {
    for (const name of Object.keys(FIGURES).sort()) console.log(name);
    return 0;
  }
  if (command !== "render") {
    console.error(usage());
    return 2;
  }
  const opts: Record<string, string> = {};
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    const value = rest[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      console.error(usage());
      return 2;
    }
    opts[key.slice(2)] = value;
  }
  const figure = opts.figure;
  const inDir = opts.in;
  const outPath = opts.out;
  if (!figure || !inDir || !outPath) {
    console.error(usage());
    return 2;
  }
  let svg: string;
  try {
    svg = render(figure, inDir);
  } catch (err) {
    if (err instanceof DataError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  fs.writeFileSync(outPath, svg);
  console.log(`wrote ${outPath}`);
  return 0;
}

const isDirect = process.argv[1] &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (isDirect) {
  process.exit(main(process.argv.slice(2)));
}
