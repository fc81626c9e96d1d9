/// <reference lib="webworker" />
/**
 * App-shell service worker: static assets are cached at install and served
 * cache-first so the shell loads offline; API calls always go to the
 * network (live data is a non-goal offline).
 *
 * The cache policy is exported for unit tests; listener wiring only runs
 * inside a real worker scope.
 */

declare const self: ServiceWorkerGlobalScope;

export const CACHE_NAME = "cropadvisor-shell-v1";

export const SHELL_ASSETS = [
  "./",
  "./index.html",
  "./styles.css",
  "./manifest.webmanifest",
  "./js/app.js",
  "./js/api.js",
  "./js/advisor.js",
  "./js/fertilizer.js",
  "./js/prices.js",
  "./js/chart.js",
  "./js/config.js",
  "./js/types.js",
  "./js/validation.js",
  "./js/weights.js",
];

/** Cache-first for same-origin static assets; never intercept the API. */
export function shouldServeFromCache(url: URL, origin: string): boolean {
  if (url.origin !== origin) return false;
  if (url.pathname.includes("/api/") || url.pathname.endsWith("/healthz")) {
    return false;
  }
  return true;
}

function wire(scope: ServiceWorkerGlobalScope): void {
  scope.addEventListener("install", (event: ExtendableEvent) => {
    event.waitUntil(
      caches.open(CACHE_NAME).then((cache) => cache.addAll(SHELL_ASSETS)),
    );
  });

  scope.addEventListener("activate", (event: ExtendableEvent) => {
    event.waitUntil(
      caches
        .keys()
        .then((names) =>
          Promise.all(
            names.filter((n) => n !== CACHE_NAME).map((n) => caches.delete(n)),
          ),
        )
        .then(() => scope.clients.claim()),
    );
  });

  scope.addEventListener("fetch", (event: FetchEvent) => {
    const url = new URL(event.request.url);
    if (!shouldServeFromCache(url, scope.location.origin)) {
      return; // fall through to the network
    }
    event.respondWith(
      caches.match(event.request).then((cached) => cached ?? fetch(event.request)),
    );
  });
}

if (typeof caches !== "undefined" && typeof self !== "undefined") {
  wire(self);
}
