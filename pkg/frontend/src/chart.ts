// Positives-per-iteration line chart, rendered as an SVG string. Hand-rolled
// instead of a canvas library so the markup stays assertable in DOM tests.

const WIDTH = 520;
const HEIGHT = 180;
const PAD = { left: 34, right: 12, top: 12, bottom: 24 };

export function historyChart(history: number[], k: number): string {
  if (history.length === 0) {
    return '<p class="chart-empty">no completed rounds yet</p>';
  }
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const yMax = Math.max(k, ...history, 1);
  const x = (i: number) =>
    history.length === 1
      ? PAD.left + innerW / 2
      : PAD.left + (i * innerW) / (history.length - 1);
  const y = (count: number) => PAD.top + innerH - (count / yMax) * innerH;

  const line =
    history.length > 1
      ? `<polyline class="chart-line" fill="none" points="${history
          .map((count, i) => `${x(i).toFixed(1)},${y(count).toFixed(1)}`)
          .join(" ")}" />`
      : "";
  const points = history
    .map(
      (count, i) =>
        `<circle class="chart-point" data-iteration="${i + 1}" data-count="${count}" ` +
        `cx="${x(i).toFixed(1)}" cy="${y(count).toFixed(1)}" r="3.5" />`,
    )
    .join("");

  // thin the x tick labels once rounds pile up
  const step = Math.max(1, Math.ceil(history.length / 12));
  const ticks = history
    .map((_, i) => i)
    .filter((i) => i % step === 0 || i === history.length - 1)
    .map(
      (i) =>
        `<text class="chart-tick" x="${x(i).toFixed(1)}" y="${HEIGHT - 6}" ` +
        `text-anchor="middle">${i + 1}</text>`,
    )
    .join("");

  const axisY = PAD.top + innerH;
  return (
    `<svg class="history-chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" ` +
    `aria-label="positives per iteration">` +
    `<line class="chart-axis" x1="${PAD.left}" y1="${axisY}" x2="${WIDTH - PAD.right}" y2="${axisY}" />` +
    `<line class="chart-axis" x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${axisY}" />` +
    `<text class="chart-tick" x="${PAD.left - 6}" y="${axisY + 4}" text-anchor="end">0</text>` +
    `<text class="chart-tick" x="${PAD.left - 6}" y="${PAD.top + 4}" text-anchor="end">${yMax}</text>` +
    line +
    points +
    ticks +
    `</svg>`
  );
}
