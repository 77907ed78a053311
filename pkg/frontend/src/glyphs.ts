/** Node glyph styling: panel hue ordered by layoutScore, shades per topic. */

import type { InsightDto, ScoreDto } from './api.js';

const PANEL_HUES = [28, 338, 200, 170, 260, 90, 50];

export interface GlyphStyle {
  fill: string;
  label: string; // two-char insight type code, drawn in white
}

/** Panels ranked by their best layoutScore take hues in palette order. */
export function panelHues(
  insights: InsightDto[],
  scores: Record<string, ScoreDto>,
): Map<string, number> {
  const best = new Map<string, number>();
  for (const insight of insights) {
    const score = scores[insight.id]?.layoutScore ?? 0;
    const prev = best.get(insight.panelId);
    if (prev === undefined || score > prev) best.set(insight.panelId, score);
  }
  const ranked = [...best.entries()].sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1));
  const hues = new Map<string, number>();
  ranked.forEach(([panelId], ix) => hues.set(panelId, PANEL_HUES[ix % PANEL_HUES.length]));
  return hues;
}

function topicKey(insight: InsightDto): string {
  const segment = insight.segment ? `${insight.segment.column}=${insight.segment.value}` : '';
  return `${insight.metrics.join('+')}|${insight.dimensions.join('+')}|${segment}`;
}

/** Lightness steps distinguish metrics/dimensions within one panel. */
export function glyphStyles(
  insights: InsightDto[],
  scores: Record<string, ScoreDto>,
): Map<string, GlyphStyle> {
  const hues = panelHues(insights, scores);
  const topicIndex = new Map<string, Map<string, number>>();
  for (const insight of insights) {
    let topics = topicIndex.get(insight.panelId);
    if (!topics) {
      topics = new Map();
      topicIndex.set(insight.panelId, topics);
    }
    const key = topicKey(insight);
    if (!topics.has(key)) topics.set(key, topics.size);
  }
  const styles = new Map<string, GlyphStyle>();
  for (const insight of insights) {
    const hue = hues.get(insight.panelId) ?? 0;
    const step = topicIndex.get(insight.panelId)!.get(topicKey(insight))!;
    const lightness = 38 + (step % 5) * 7;
    styles.set(insight.id, {
      fill: `hsl(${hue}, 62%, ${lightness}%)`,
      label: insight.type,
    });
  }
  return styles;
}
