#!/usr/bin/env node
import { writeFileSync } from 'node:fs';
import { parseArgs } from 'node:util';
import { SchemaError, loadCsv } from './csv.js';
import { FAMILIES, Family, render } from './figures.js';

const USAGE =
  'usage: colltherm-figures render --family <fig2|fig3|fig4|fig5|fig6> ' +
  '--in <csv> --out <svg|png>';

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  if (command !== 'render') {
    console.error(USAGE);
    return 1;
  }
  let values;
  try {
    ({ values } = parseArgs({
      args: rest,
      options: {
        family: { type: 'string' },
        in: { type: 'string' },
        out: { type: 'string' },
      },
    }));
  } catch (err) {
    console.error(`${(err as Error).message}\n${USAGE}`);
    return 1;
  }
  const { family, in: input, out } = values;
  if (!family || !input || !out) {
    console.error(USAGE);
    return 1;
  }
  if (!FAMILIES.includes(family as Family)) {
    console.error(`unknown figure family '${family}'; expected one of ${FAMILIES.join(', ')}`);
    return 1;
  }
  try {
    const table = loadCsv(input);
    const { svg, warnings } = render(family as Family, table);
    for (const warning of warnings) {
      console.warn(`warning: ${warning}`);
    }
    if (out.endsWith('.png')) {
      const { Resvg } = await import('@resvg/resvg-js');
      writeFileSync(out, new Resvg(svg).render().asPng());
    } else {
      writeFileSync(out, svg);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 2;
  }
  return 0;
}

const isDirectRun = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split('/').pop() ?? '');
if (isDirectRun) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
