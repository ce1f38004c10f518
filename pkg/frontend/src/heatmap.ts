/** Render a server-computed activation grid as a small diverging-color tile. */

function shade(value: number): [number, number, number] {
  // -1 -> red, 0 -> near white, +1 -> blue
  const t = Math.max(-1, Math.min(1, value));
  const mid: [number, number, number] = [245, 245, 245];
  const pos: [number, number, number] = [33, 102, 172];
  const neg: [number, number, number] = [178, 24, 43];
  const target = t >= 0 ? pos : neg;
  const amount = Math.abs(t);
  return [
    Math.round(mid[0] + (target[0] - mid[0]) * amount),
    Math.round(mid[1] + (target[1] - mid[1]) * amount),
    Math.round(mid[2] + (target[2] - mid[2]) * amount),
  ];
}

export function renderTile(
  ctx: CanvasRenderingContext2D,
  grid: number[][],
  size: number
): void {
  const rows = grid.length;
  const cols = grid[0]?.length ?? 0;
  if (!rows || !cols) return;
  const cellW = size / cols;
  const cellH = size / rows;
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const [red, green, blue] = shade(grid[rows - 1 - r][c]);
      ctx.fillStyle = `rgb(${red},${green},${blue})`;
      ctx.fillRect(c * cellW, r * cellH, cellW + 0.5, cellH + 0.5);
    }
  }
}
