import { mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterEach, describe, expect, it, vi } from 'vitest';
import { main } from '../src/cli.js';
import { INFOFLOW_CSV, QFI_SWEEP_CSV, writeTemp } from './fixtures.js';

function outPath(name: string): string {
  return join(mkdtempSync(join(tmpdir(), 'colltherm-out-')), name);
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe('cli main', () => {
  it('renders an SVG and exits 0', async () => {
    const input = writeTemp(QFI_SWEEP_CSV, 'qfi-sweep.csv');
    const out = outPath('fig2.svg');
    const code = await main(['render', '--family', 'fig2', '--in', input, '--out', out]);
    expect(code).toBe(0);
    expect(readFileSync(out, 'utf8')).toContain('</svg>');
  });

  it('renders a PNG when the output ends in .png', async () => {
    const input = writeTemp(QFI_SWEEP_CSV, 'qfi-sweep.csv');
    const out = outPath('fig2.png');
    const code = await main(['render', '--family', 'fig2', '--in', input, '--out', out]);
    expect(code).toBe(0);
    const bytes = readFileSync(out);
    expect(bytes.subarray(1, 4).toString()).toBe('PNG');
  });

  it('reruns byte-identically', async () => {
    const input = writeTemp(INFOFLOW_CSV, 'infoflow.csv');
    const outputs: Buffer[] = [];
    for (const name of ['a.svg', 'b.svg']) {
      const out = outPath(name);
      await main(['render', '--family', 'fig3', '--in', input, '--out', out]);
      outputs.push(readFileSync(out));
    }
    expect(outputs[0].equals(outputs[1])).toBe(true);
  });

  it('rejects an unknown family', async () => {
    const err = vi.spyOn(console, 'error').mockImplementation(() => {});
    const input = writeTemp(QFI_SWEEP_CSV);
    const code = await main(['render', '--family', 'fig9', '--in', input, '--out', 'x.svg']);
    expect(code).toBe(1);
    expect(err.mock.calls[0][0]).toContain('fig9');
  });

  it('rejects missing arguments with usage', async () => {
    const err = vi.spyOn(console, 'error').mockImplementation(() => {});
    expect(await main(['render', '--family', 'fig2'])).toBe(1);
    expect(err.mock.calls[0][0]).toContain('usage:');
  });

  it('rejects a non-render command', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    expect(await main(['plot'])).toBe(1);
  });

  it('exits 1 with the column name on schema mismatch', async () => {
    const err = vi.spyOn(console, 'error').mockImplementation(() => {});
    const input = writeTemp('a,b\n1,2\n');
    const code = await main(
      ['render', '--family', 'fig6', '--in', input, '--out', outPath('x.svg')],
    );
    expect(code).toBe(1);
    expect(err.mock.calls[0][0]).toContain("'n_chains'");
  });

  it('exits 1 naming the file for an empty CSV', async () => {
    const err = vi.spyOn(console, 'error').mockImplementation(() => {});
    const input = writeTemp('time,subject,distance\n', 'hollow.csv');
    const code = await main(
      ['render', '--family', 'fig3', '--in', input, '--out', outPath('x.svg')],
    );
    expect(code).toBe(1);
    expect(err.mock.calls[0][0]).toContain('hollow.csv');
  });

  it('surfaces warnings for degraded renders', async () => {
    const warn = vi.spyOn(console, 'warn').mockImplementation(() => {});
    const stripped = INFOFLOW_CSV.split('\n')
      .map((line) => {
        const cells = line.split(',');
        return [...cells.slice(0, 3), ...cells.slice(4)].join(',');
      })
      .join('\n');
    const input = writeTemp(stripped, 'infoflow.csv');
    const code = await main(
      ['render', '--family', 'fig3', '--in', input, '--out', outPath('x.svg')],
    );
    expect(code).toBe(0);
    expect(warn.mock.calls[0][0]).toContain('sigma');
  });
});
