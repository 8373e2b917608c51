#!/usr/bin/env node
/** plot region <records.csv> -o out.svg
 *  plot sweep <records.csv...> --axis M|A|N -o out.svg */

import { plotRegionFile, plotSweepFiles } from "./index.js";

function usage(): never {
  console.error("usage: plotkit region <records.csv> -o <out.svg>");
  console.error("       plotkit sweep <records.csv...> --axis <M|A|N> -o <out.svg>");
  process.exit(2);
}

function takeOption(args: string[], name: string): string {
  const idx = args.indexOf(name);
  if (idx < 0 || idx + 1 >= args.length) usage();
  const value = args[idx + 1];
  args.splice(idx, 2);
  return value;
}

export function main(argv: string[]): number {
  const args = [...argv];
  const command = args.shift();
  if (command === "region") {
    const out = takeOption(args, "-o");
    if (args.length !== 1) usage();
    plotRegionFile(args[0], out);
    console.log(`wrote ${out}`);
    return 0;
  }
  if (command === "sweep") {
    const out = takeOption(args, "-o");
    const axis = takeOption(args, "--axis");
    if (args.length < 1 || !["M", "A", "N"].includes(axis)) usage();
    plotSweepFiles(args, axis as "M" | "A" | "N", out);
    console.log(`wrote ${out}`);
    return 0;
  }
  usage();
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("plotkit")) {
  process.exit(main(process.argv.slice(2)));
}
