/**
 * What-if weight slider arithmetic. The slider holds an integer position in
 * [0, 100] for the suitability weight; the price weight is its complement,
 * so outgoing requests always carry weights summing to exactly 1.
 */
export const SLIDER_MAX = 100;
export const DEFAULT_SLIDER_POSITION = 60; // matches the service default 0.6/0.4
export function sliderToWeights(position) {
    const clamped = Math.min(SLIDER_MAX, Math.max(0, Math.round(position)));
    const w1 = clamped / SLIDER_MAX;
    // complement in integer space, then scale: avoids 1 - 0.x float residue
    const w2 = (SLIDER_MAX - clamped) / SLIDER_MAX;
    return { w1, w2 };
}
export function weightsLabel(weights) {
    return `suitability ${weights.w1.toFixed(2)} / price ${weights.w2.toFixed(2)}`;
}
export function weightsSumToOne(weights) {
    return Math.abs(weights.w1 + weights.w2 - 1) <= 1e-9;
}
