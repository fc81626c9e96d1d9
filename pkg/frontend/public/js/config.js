/**
 * Build/deploy-time configuration.
 *
 * The API base URL comes from the <meta name="api-base"> tag in index.html,
 * so a deployment can point the static bundle at any service origin without
 * recompiling. An empty base means same-origin requests.
 */
export function apiBase(doc) {
    const d = doc ?? (typeof document === "undefined" ? undefined : document);
    if (!d)
        return "";
    const meta = d.querySelector('meta[name="api-base"]');
    const value = meta?.getAttribute("content")?.trim() ?? "";
    return value.replace(/\/+$/, "");
}
