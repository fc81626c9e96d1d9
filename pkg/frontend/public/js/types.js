/**
 * Payload types mirroring the published /api/v1 contract (docs/openapi.json).
 * The UI never computes advisory numbers itself; everything rendered comes
 * from these response shapes.
 */
export {};
