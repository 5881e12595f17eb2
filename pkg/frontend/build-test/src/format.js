/** Pure display helpers: fused-text splitting and the beta slider scale. */
/** Split fused text at the wiki prefix boundary (the server guarantees
 * fused_text starts with wiki_text verbatim). */
export function splitFused(wikiText, fusedText) {
    if (!fusedText.startsWith(wikiText)) {
        throw new Error("fused_text does not start with wiki_text");
    }
    return { wiki: fusedText.slice(0, wikiText.length), continuation: fusedText.slice(wikiText.length) };
}
/** Slider positions are integers 0..200 mapping linearly onto beta 0..2;
 * the infinity flag is a separate toggle. */
export const SLIDER_MAX = 200;
export function sliderToBeta(position) {
    const clamped = Math.min(Math.max(position, 0), SLIDER_MAX);
    return clamped / 100;
}
export function betaToSlider(beta) {
    if (beta === "inf") {
        return SLIDER_MAX;
    }
    return Math.min(Math.max(Math.round(beta * 100), 0), SLIDER_MAX);
}
export function betaLabel(beta) {
    return beta === "inf" ? "∞" : beta.toFixed(2).replace(/\.?0+$/, "") || "0";
}
export function formatScore(value) {
    return value.toFixed(4);
}
