#!/usr/bin/env node
// figures <kind> <input> <output>  or  figures --spec spec.json
//
// <input> is a run directory from the producer CLI (the needed artifact
// files are resolved inside it) or a direct path to the relevant file.
// Output is SVG; a .png output path additionally rasterizes when the
// optional sharp dependency is installed.

import { existsSync, statSync, writeFileSync, readFileSync } from "fs";
import { join } from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import {
  renderChargeDrift,
  renderConvergence,
  renderHeatmap,
  renderNormGrowth,
  renderPairing,
} from "./figures.js";
import { loadConvergence, loadFields, loadFit, loadPairing } from "./schema.js";

export const KINDS = [
  "pairing-vs-logeps",
  "charge-drift",
  "norm-growth",
  "heatmap",
  "convergence",
] as const;
export type Kind = (typeof KINDS)[number];

function resolveArtifact(input: string, filename: string): string {
  if (existsSync(input) && statSync(input).isDirectory()) {
    const p = join(input, filename);
    if (!existsSync(p)) {
      throw new Error(`${input}: expected artifact ${filename} not found`);
    }
    return p;
  }
  if (!existsSync(input)) {
    throw new Error(`${input}: no such file or directory`);
  }
  return input;
}

export function renderKind(kind: Kind, input: string): string {
  switch (kind) {
    case "pairing-vs-logeps": {
      const rows = loadPairing(resolveArtifact(input, "pairing.csv"));
      const fitPath = existsSync(input) && statSync(input).isDirectory()
        ? join(input, "fit.json")
        : join(input, "..", "fit.json");
      if (!existsSync(fitPath)) throw new Error(`${fitPath}: fit summary not found`);
      return renderPairing(rows, loadFit(fitPath));
    }
    case "charge-drift":
      return renderChargeDrift(loadFields(resolveArtifact(input, "fields.csv")));
    case "norm-growth":
      return renderNormGrowth(loadFields(resolveArtifact(input, "fields.csv")));
    case "heatmap":
      return renderHeatmap(loadFields(resolveArtifact(input, "fields.csv")));
    case "convergence":
      return renderConvergence(loadConvergence(resolveArtifact(input, "convergence.csv")));
  }
}

async function writeFigure(svg: string, output: string): Promise<void> {
  if (output.endsWith(".png")) {
    let sharp;
    try {
      sharp = (await import("sharp")).default;
    } catch {
      throw new Error("PNG output requires the optional sharp dependency; use a .svg path");
    }
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    writeFileSync(output, png);
    return;
  }
  writeFileSync(output, svg);
}

interface SpecEntry {
  kind: Kind;
  input: string;
  output: string;
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .command("$0 [kind] [input] [output]", "render one figure", (y) =>
      y
        .positional("kind", { type: "string", choices: KINDS as unknown as string[] })
        .positional("input", { type: "string" })
        .positional("output", { type: "string" }),
    )
    .option("spec", { type: "string", describe: "JSON list of {kind, input, output}" })
    .strict()
    .parse();

  try {
    let entries: SpecEntry[];
    if (args.spec) {
      const raw = JSON.parse(readFileSync(args.spec, "utf-8"));
      if (!Array.isArray(raw)) throw new Error(`${args.spec}: spec must be a JSON array`);
      entries = raw.map((e: SpecEntry) => {
        if (!KINDS.includes(e.kind)) throw new Error(`${args.spec}: unknown kind "${e.kind}"`);
        if (!e.input || !e.output) throw new Error(`${args.spec}: entries need input and output`);
        return e;
      });
    } else {
      if (!args.kind || !args.input || !args.output) {
        console.error("usage: figures <kind> <input> <output> | figures --spec spec.json");
        return 2;
      }
      entries = [
        { kind: args.kind as Kind, input: String(args.input), output: String(args.output) },
      ];
    }
    for (const e of entries) {
      await writeFigure(renderKind(e.kind, e.input), e.output);
      console.log(`wrote ${e.output}`);
    }
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
