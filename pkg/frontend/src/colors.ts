/** Color assignments for server-issued tokens.
 *
 * Bands and legend entries are colored purely from their tokens so a
 * legend edit recolors cells without touching row order or membership.
 */

const LEGEND_COLORS: Record<string, string> = {
  "band-1": "#2c7fb8",
  "band-2": "#7fcdbb",
  "band-3": "#fec44f",
  "band-4": "#fe9929",
  "band-5": "#d95f0e",
};

const EXTRA_BAND = "#756bb1"; // legends longer than five bands cycle here

export function legendColor(colorToken: string): string {
  return LEGEND_COLORS[colorToken] ?? EXTRA_BAND;
}

const OUTCOME_COLORS: Record<string, string> = {
  good: "#31a354",
  moderate: "#fd8d3c",
  poor: "#de2d26",
  unknown: "#bdbdbd",
};

export function outcomeColor(band: string): string {
  return OUTCOME_COLORS[band] ?? OUTCOME_COLORS.unknown;
}

const BAR_FLAG_COLORS: Record<string, string> = {
  above: "#de2d26",
  below: "#3182bd",
  inRange: "#31a354",
  outRange: "#de2d26",
};

export function barColor(flag: string): string {
  return BAR_FLAG_COLORS[flag] ?? "#636363";
}
