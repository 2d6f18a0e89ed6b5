// Tiny DOM helpers. Data always goes through textContent, never innerHTML,
// so evidence strings render verbatim and inert.

export function el(
  tag: string,
  className = "",
  text: string | null = null,
): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== null) node.textContent = text;
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function secondsLabel(millis: number): string {
  return `${(millis / 1000).toFixed(0)}s`;
}

export function numberLabel(value: number | null, digits = 2): string {
  return value === null ? "–" : value.toFixed(digits);
}
