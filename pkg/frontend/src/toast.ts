// Non-blocking corner notice, used when the scoring service is unreachable.

export const TOAST_ID = "cl-toast";

export function showToast(doc: Document, message: string, ttlMs = 6000): void {
  doc.getElementById(TOAST_ID)?.remove();
  const node = doc.createElement("div");
  node.id = TOAST_ID;
  node.setAttribute("role", "status");
  node.textContent = message;
  node.style.cssText =
    "position:fixed;bottom:16px;right:16px;z-index:2147483647;max-width:320px;" +
    "padding:10px 14px;border-radius:6px;background:#333;color:#fff;" +
    "font:13px/18px system-ui,sans-serif;box-shadow:0 2px 8px rgba(0,0,0,.35);";
  doc.body.appendChild(node);
  setTimeout(() => node.remove(), ttlMs);
}
