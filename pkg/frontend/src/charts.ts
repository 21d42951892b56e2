// Minimal dependency-free SVG chart builders. Pure string producers: the
// caller injects the markup into the page. Every plotted number comes from
// an API payload; these functions only scale coordinates.

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
}

export interface Marker {
  x: number;
  y: number;
  label: string;
  color?: string;
}

interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function sx(frame: Frame, x: number): number {
  const span = frame.xMax - frame.xMin || 1;
  return frame.left + ((x - frame.xMin) / span) * (frame.width - frame.left - frame.right);
}

function sy(frame: Frame, y: number): number {
  const span = frame.yMax - frame.yMin || 1;
  return frame.height - frame.bottom - ((y - frame.yMin) / span) * (frame.height - frame.top - frame.bottom);
}

function ticks(min: number, max: number, count: number): number[] {
  if (!(max > min)) return [min];
  const out: number[] = [];
  for (let i = 0; i <= count; i += 1) out.push(min + ((max - min) * i) / count);
  return out;
}

function fmt(value: number): string {
  const magnitude = Math.abs(value);
  if (magnitude >= 10000) return value.toFixed(0);
  if (magnitude >= 10) return value.toFixed(1);
  return value.toFixed(2);
}

export function lineChart(options: {
  title: string;
  series: Series[];
  markers?: Marker[];
  width?: number;
  height?: number;
}): string {
  const width = options.width ?? 560;
  const height = options.height ?? 300;
  const all = options.series.flatMap((s) => s.points);
  const xs = all.map((p) => p[0]);
  const ys = all.map((p) => p[1]).concat((options.markers ?? []).map((m) => m.y));
  const frame: Frame = {
    width,
    height,
    left: 62,
    right: 14,
    top: 28,
    bottom: 30,
    xMin: xs.length ? Math.min(...xs) : 0,
    xMax: xs.length ? Math.max(...xs) : 1,
    yMin: ys.length ? Math.min(0, ...ys) : 0,
    yMax: ys.length ? Math.max(...ys) * 1.05 : 1,
  };
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="chart" role="img">`,
  );
  parts.push(`<text x="${frame.left}" y="18" class="chart-title">${esc(options.title)}</text>`);
  for (const tick of ticks(frame.yMin, frame.yMax, 4)) {
    const y = sy(frame, tick);
    parts.push(
      `<line x1="${frame.left}" y1="${y}" x2="${width - frame.right}" y2="${y}" class="grid"/>`,
      `<text x="${frame.left - 6}" y="${y + 4}" text-anchor="end" class="tick">${fmt(tick)}</text>`,
    );
  }
  for (const tick of ticks(frame.xMin, frame.xMax, 6)) {
    const x = sx(frame, tick);
    parts.push(
      `<text x="${x}" y="${height - 8}" text-anchor="middle" class="tick">${fmt(tick)}</text>`,
    );
  }
  options.series.forEach((series, index) => {
    const path = series.points
      .map((p) => `${sx(frame, p[0]).toFixed(2)},${sy(frame, p[1]).toFixed(2)}`)
      .join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="${series.color}" stroke-width="1.8"/>`);
    parts.push(
      `<text x="${width - frame.right}" y="${frame.top + 14 * index}" text-anchor="end" fill="${series.color}" class="legend">${esc(series.label)}</text>`,
    );
  });
  for (const marker of options.markers ?? []) {
    const x = sx(frame, marker.x);
    const y = sy(frame, marker.y);
    const color = marker.color ?? "#222";
    parts.push(
      `<line x1="${x}" y1="${frame.top}" x2="${x}" y2="${height - frame.bottom}" stroke="${color}" stroke-dasharray="4 3" class="marker-line"/>`,
      `<circle cx="${x}" cy="${y}" r="4" fill="${color}"/>`,
      `<text x="${x + 6}" y="${frame.top + 12}" fill="${color}" class="annotation">${esc(marker.label)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function barChart(options: {
  title: string;
  bars: Array<{ label: string; value: number; color?: string }>;
  width?: number;
  height?: number;
}): string {
  const width = options.width ?? 560;
  const height = options.height ?? 240;
  const left = 62;
  const bottom = 44;
  const top = 28;
  const maxValue = Math.max(1, ...options.bars.map((b) => b.value));
  const slot = (width - left - 14) / Math.max(1, options.bars.length);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="chart" role="img">`,
    `<text x="${left}" y="18" class="chart-title">${esc(options.title)}</text>`,
  ];
  options.bars.forEach((bar, index) => {
    const barHeight = ((height - top - bottom) * bar.value) / (maxValue * 1.05);
    const x = left + slot * index + slot * 0.15;
    const y = height - bottom - barHeight;
    parts.push(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${(slot * 0.7).toFixed(2)}" height="${barHeight.toFixed(2)}" fill="${bar.color ?? "#4a7fb5"}"/>`,
      `<text x="${(x + slot * 0.35).toFixed(2)}" y="${(y - 6).toFixed(2)}" text-anchor="middle" class="bar-value">${fmt(bar.value)}</text>`,
      `<text x="${(x + slot * 0.35).toFixed(2)}" y="${height - bottom + 16}" text-anchor="middle" class="tick">${esc(bar.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
