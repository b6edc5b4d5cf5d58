/** Minimal deterministic SVG chart builder: fixed layout, fixed number
 * formatting, no timestamps or randomness, so identical input data always
 * produces byte-identical markup. */

export const PALETTE = [
  '#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e',
  '#8c564b', '#e377c2', '#17becf', '#7f7f7f', '#bcbd22',
];

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dashed?: boolean;
  markers?: boolean;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

const PANEL_W = 360;
const PANEL_H = 280;
const MARGIN = { top: 34, right: 16, bottom: 44, left: 58 };

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return '0';
  if (x === 0) return '0';
  let s = x.toPrecision(6);
  if (s.includes('.') && !s.includes('e')) {
    s = s.replace(/\.?0+$/, '');
  }
  return s;
}

function tickFmt(x: number): string {
  if (x === 0) return '0';
  const magnitude = Math.abs(x);
  if (magnitude >= 1e4 || magnitude < 1e-3) return x.toExponential(1);
  let s = x.toPrecision(4);
  if (s.includes('.')) s = s.replace(/\.?0+$/, '');
  return s;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;');
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / count;
  const power = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  const step = candidates.find((c) => span / c <= count) ?? candidates[3];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

function makeScale(lo: number, hi: number, rangeLo: number, rangeHi: number): Scale {
  if (!(hi > lo)) {
    hi = lo + (lo === 0 ? 1 : Math.abs(lo) * 0.1);
    lo = lo - (hi - lo);
  }
  const f = ((v: number) =>
    rangeLo + ((v - lo) / (hi - lo)) * (rangeHi - rangeLo)) as Scale;
  f.ticks = niceTicks(lo, hi);
  return f;
}

function finiteExtent(seriesList: Series[], axis: 'x' | 'y'): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of seriesList) {
    for (const v of s[axis]) {
      if (Number.isFinite(v)) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (lo === Infinity) return [0, 1];
  return [lo, hi];
}

/** Polyline path split at non-finite samples. */
function seriesPath(s: Series, sx: Scale, sy: Scale): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < s.x.length; i++) {
    if (!Number.isFinite(s.x[i]) || !Number.isFinite(s.y[i])) {
      pen = false;
      continue;
    }
    const cmd = pen ? 'L' : 'M';
    parts.push(`${cmd}${fmt(sx(s.x[i]))} ${fmt(sy(s.y[i]))}`);
    pen = true;
  }
  return parts.join(' ');
}

function renderPanel(panel: PanelSpec, originX: number, originY: number): string {
  const x0 = originX + MARGIN.left;
  const x1 = originX + PANEL_W - MARGIN.right;
  const y0 = originY + PANEL_H - MARGIN.bottom;
  const y1 = originY + MARGIN.top;
  const [xLo, xHi] = finiteExtent(panel.series, 'x');
  const [yLo, yHi] = finiteExtent(panel.series, 'y');
  const pad = (yHi - yLo) * 0.05 || Math.abs(yHi) * 0.05 || 0.5;
  const sx = makeScale(xLo, xHi, x0, x1);
  const sy = makeScale(yLo - pad, yHi + pad, y0, y1);

  const out: string[] = [];
  out.push(`<g class="panel">`);
  out.push(
    `<text x="${fmt(originX + PANEL_W / 2)}" y="${fmt(originY + 18)}" ` +
      `text-anchor="middle" font-size="13" font-weight="bold">` +
      `${escapeXml(panel.title)}</text>`,
  );
  for (const t of sx.ticks) {
    const px = fmt(sx(t));
    out.push(`<line x1="${px}" y1="${fmt(y0)}" x2="${px}" y2="${fmt(y0 + 4)}" stroke="#000"/>`);
    out.push(
      `<text x="${px}" y="${fmt(y0 + 16)}" text-anchor="middle" font-size="10">` +
        `${tickFmt(t)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const py = fmt(sy(t));
    out.push(`<line x1="${fmt(x0 - 4)}" y1="${py}" x2="${fmt(x0)}" y2="${py}" stroke="#000"/>`);
    out.push(
      `<text x="${fmt(x0 - 7)}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="10">${tickFmt(t)}</text>`,
    );
    out.push(
      `<line x1="${fmt(x0)}" y1="${py}" x2="${fmt(x1)}" y2="${py}" ` +
        `stroke="#ddd" stroke-width="0.5"/>`,
    );
  }
  out.push(
    `<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" height="${fmt(y0 - y1)}" ` +
      `fill="none" stroke="#000"/>`,
  );
  out.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y0 + 32)}" text-anchor="middle" ` +
      `font-size="11">${escapeXml(panel.xLabel)}</text>`,
  );
  out.push(
    `<text x="${fmt(originX + 14)}" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" ` +
      `font-size="11" transform="rotate(-90 ${fmt(originX + 14)} ${fmt((y0 + y1) / 2)})">` +
      `${escapeXml(panel.yLabel)}</text>`,
  );
  for (const s of panel.series) {
    const path = seriesPath(s, sx, sy);
    if (path !== '') {
      const dash = s.dashed ? ' stroke-dasharray="5 3"' : '';
      out.push(
        `<path d="${path}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`,
      );
    }
    if (s.markers) {
      for (let i = 0; i < s.x.length; i++) {
        if (Number.isFinite(s.x[i]) && Number.isFinite(s.y[i])) {
          out.push(
            `<circle cx="${fmt(sx(s.x[i]))}" cy="${fmt(sy(s.y[i]))}" r="2.5" ` +
              `fill="${s.color}"/>`,
          );
        }
      }
    }
  }
  let legendY = y1 + 10;
  for (const s of panel.series) {
    if (s.label === '') continue;
    out.push(
      `<line x1="${fmt(x1 - 86)}" y1="${fmt(legendY)}" x2="${fmt(x1 - 66)}" ` +
        `y2="${fmt(legendY)}" stroke="${s.color}" stroke-width="1.5"` +
        `${s.dashed ? ' stroke-dasharray="5 3"' : ''}/>`,
    );
    out.push(
      `<text x="${fmt(x1 - 61)}" y="${fmt(legendY)}" font-size="10" ` +
        `dominant-baseline="middle">${escapeXml(s.label)}</text>`,
    );
    legendY += 13;
  }
  out.push('</g>');
  return out.join('\n');
}

export function renderFigure(title: string, panels: PanelSpec[], columns: number): string {
  const cols = Math.min(columns, panels.length);
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H + 26;
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${width}" height="${height}" fill="#fff"/>`);
  out.push(
    `<text x="${fmt(width / 2)}" y="17" text-anchor="middle" font-size="15" ` +
      `font-weight="bold">${escapeXml(title)}</text>`,
  );
  panels.forEach((panel, i) => {
    const col = i % cols;
    const row = Math.floor(i / cols);
    out.push(renderPanel(panel, col * PANEL_W, 26 + row * PANEL_H));
  });
  out.push('</svg>');
  return out.join('\n') + '\n';
}
