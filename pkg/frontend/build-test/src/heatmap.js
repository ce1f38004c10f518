"use strict";
/** Render a server-computed activation grid as a small diverging-color tile. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.renderTile = renderTile;
function shade(value) {
    // -1 -> red, 0 -> near white, +1 -> blue
    const t = Math.max(-1, Math.min(1, value));
    const mid = [245, 245, 245];
    const pos = [33, 102, 172];
    const neg = [178, 24, 43];
    const target = t >= 0 ? pos : neg;
    const amount = Math.abs(t);
    return [
        Math.round(mid[0] + (target[0] - mid[0]) * amount),
        Math.round(mid[1] + (target[1] - mid[1]) * amount),
        Math.round(mid[2] + (target[2] - mid[2]) * amount),
    ];
}
function renderTile(ctx, grid, size) {
    const rows = grid.length;
    const cols = grid[0]?.length ?? 0;
    if (!rows || !cols)
        return;
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
