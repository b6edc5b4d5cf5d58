import { Table, distinct, requireColumns } from './csv.js';
import { PALETTE, PanelSpec, Series, renderFigure } from './svg.js';

export const FAMILIES = ['fig2', 'fig3', 'fig4', 'fig5', 'fig6'] as const;
export type Family = (typeof FAMILIES)[number];

export interface RenderResult {
  svg: string;
  warnings: string[];
}

function num(row: Record<string, string>, column: string): number {
  const cell = row[column];
  return cell === '' || cell === undefined ? NaN : Number(cell);
}

function sortedBy(rows: Record<string, string>[], column: string) {
  return [...rows].sort((a, b) => num(a, column) - num(b, column));
}

function toSeries(
  rows: Record<string, string>[],
  xCol: string,
  yCol: string,
  label: string,
  color: string,
  extra: Partial<Series> = {},
): Series {
  const sorted = sortedBy(rows, xCol);
  return {
    label,
    x: sorted.map((r) => num(r, xCol)),
    y: sorted.map((r) => num(r, yCol)),
    color,
    ...extra,
  };
}

/** qfi-sweep table: QFI vs T per chain count; cumulative FI vs round;
 * peak QFI vs chain count. */
function renderFig2(table: Table): RenderResult {
  requireColumns(table, ['temperature', 'n_chains', 'qfi']);
  const warnings: string[] = [];
  const chainCounts = distinct(table.rows.map((r) => num(r, 'n_chains'))).sort(
    (a, b) => Number(a) - Number(b),
  );
  const hasRounds = table.columns.includes('round_j');
  const firstRound = hasRounds
    ? Math.min(...table.rows.map((r) => num(r, 'round_j')))
    : NaN;
  const baseRows = hasRounds
    ? table.rows.filter((r) => num(r, 'round_j') === firstRound)
    : table.rows;

  const qfiVsT: PanelSpec = {
    title: 'QFI vs temperature',
    xLabel: 'T',
    yLabel: 'QFI',
    series: chainCounts.map((n, i) =>
      toSeries(
        baseRows.filter((r) => num(r, 'n_chains') === n),
        'temperature',
        'qfi',
        `N = ${n}`,
        PALETTE[i % PALETTE.length],
      ),
    ),
  };
  if (table.columns.includes('qfi_thermal')) {
    qfiVsT.series.push(
      toSeries(baseRows.filter((r) => num(r, 'n_chains') === chainCounts[0]),
               'temperature', 'qfi_thermal', 'thermal', '#555', { dashed: true }),
    );
  } else {
    warnings.push("column 'qfi_thermal' absent: thermal benchmark curve omitted");
  }

  const panels = [qfiVsT];

  if (hasRounds && table.columns.includes('cumulative_fi')) {
    const rounds = distinct(table.rows.map((r) => num(r, 'round_j'))).sort(
      (a, b) => Number(a) - Number(b),
    );
    panels.push({
      title: 'Cumulative FI vs rounds',
      xLabel: 'rounds n',
      yLabel: 'n x QFI',
      series: chainCounts.map((n, i) => ({
        label: `N = ${n}`,
        x: rounds.map(Number),
        y: rounds.map((j) =>
          Math.max(
            ...table.rows
              .filter((r) => num(r, 'n_chains') === n && num(r, 'round_j') === j)
              .map((r) => num(r, 'cumulative_fi')),
          ),
        ),
        color: PALETTE[i % PALETTE.length],
        markers: true,
      })),
    });
  } else {
    warnings.push("columns 'round_j'/'cumulative_fi' absent: rounds panel omitted");
  }

  panels.push({
    title: 'Peak QFI vs chain count',
    xLabel: 'N',
    yLabel: 'max QFI over T',
    series: [
      {
        label: '',
        x: chainCounts.map(Number),
        y: chainCounts.map((n) =>
          Math.max(
            ...baseRows
              .filter((r) => num(r, 'n_chains') === n)
              .map((r) => num(r, 'qfi')),
          ),
        ),
        color: PALETTE[0],
        markers: true,
      },
    ],
  });

  return { svg: renderFigure('Layered-thermometer sensitivity', panels, 3), warnings };
}

/** infoflow table: trace distance and its derivative, for the system and
 * for each ancilla. */
function renderFig3(table: Table): RenderResult {
  requireColumns(table, ['time', 'subject', 'distance']);
  const warnings: string[] = [];
  const subjects = distinct(table.rows.map((r) => r.subject)) as string[];
  const ancillae = subjects.filter((s) => s.startsWith('A')).sort();

  const bySubject = (subject: string) =>
    table.rows.filter((r) => r.subject === subject);

  const distancePanel = (title: string, picks: string[]): PanelSpec => ({
    title,
    xLabel: 'collision time',
    yLabel: 'trace distance D',
    series: picks.map((s, i) =>
      toSeries(bySubject(s), 'time', 'distance', s, PALETTE[i % PALETTE.length]),
    ),
  });

  const panels = [
    distancePanel('System distinguishability', ['S']),
    distancePanel('Ancilla distinguishability', ancillae),
  ];

  if (table.columns.includes('sigma')) {
    const sigmaPanel = (title: string, picks: string[]): PanelSpec => ({
      title,
      xLabel: 'collision time',
      yLabel: 'sigma = dD/dt',
      series: picks.map((s, i) =>
        toSeries(bySubject(s), 'time', 'sigma', s, PALETTE[i % PALETTE.length]),
      ),
    });
    panels.push(sigmaPanel('System flow', ['S']));
    panels.push(sigmaPanel('Ancilla flow', ancillae));
  } else {
    warnings.push("column 'sigma' absent: flow panels omitted");
  }

  return { svg: renderFigure('Information flow during collisions', panels, 2), warnings };
}

/** checkpoint QFI table (full- or partial-swap run): QFI vs T per
 * (checkpoint, party). */
function renderCheckpointQfi(table: Table, title: string): RenderResult {
  requireColumns(table, ['temperature', 'checkpoint', 'party', 'qfi']);
  const keys = distinct(
    table.rows.map((r) => `${r.checkpoint}:${r.party}`),
  ) as string[];
  const panel: PanelSpec = {
    title: 'QFI at post-collision checkpoints',
    xLabel: 'T',
    yLabel: 'QFI',
    series: keys.map((key, i) => {
      const [checkpoint, party] = key.split(':');
      return toSeries(
        table.rows.filter(
          (r) => r.checkpoint === checkpoint && r.party === party,
        ),
        'temperature',
        'qfi',
        `c${checkpoint} ${party}`,
        PALETTE[i % PALETTE.length],
        { dashed: party === 'S' },
      );
    }),
  };
  return { svg: renderFigure(title, [panel], 1), warnings: [] };
}

/** mutual-info table: I(S:A_k) against the receiving chain, per chain
 * count N. */
function renderFig6(table: Table): RenderResult {
  requireColumns(table, ['n_chains', 'chain_k', 'mutual_information']);
  const chainCounts = distinct(table.rows.map((r) => num(r, 'n_chains'))).sort(
    (a, b) => Number(a) - Number(b),
  );
  const panel: PanelSpec = {
    title: 'System-ancilla correlations',
    xLabel: 'chain k',
    yLabel: 'I(S : A_k)',
    series: chainCounts.map((n, i) =>
      toSeries(
        table.rows.filter((r) => num(r, 'n_chains') === n),
        'chain_k',
        'mutual_information',
        `N = ${n}`,
        PALETTE[i % PALETTE.length],
        { markers: true },
      ),
    ),
  };
  return { svg: renderFigure('Mutual information along the round', [panel], 1), warnings: [] };
}

export function render(family: Family, table: Table): RenderResult {
  switch (family) {
    case 'fig2':
      return renderFig2(table);
    case 'fig3':
      return renderFig3(table);
    case 'fig4':
      return renderCheckpointQfi(table, 'Full-swap QFI relay');
    case 'fig5':
      return renderCheckpointQfi(table, 'Partial-swap QFI accumulation');
    case 'fig6':
      return renderFig6(table);
  }
}
