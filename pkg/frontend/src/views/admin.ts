// Whitelist admin form; stays hidden unless the API reports it enabled.

import { clear, el } from "../dom.js";

export function renderAdmin(
  root: HTMLElement,
  enabled: boolean,
  onSubmit: (address: string, action: "add" | "remove") => void,
): void {
  clear(root);
  if (!enabled) {
    root.className = "admin hidden";
    return;
  }
  root.className = "admin";
  root.appendChild(el("h2", "", "Whitelist"));
  const input = el("input") as HTMLInputElement;
  input.placeholder = "source address";
  const addBtn = el("button", "", "add") as HTMLButtonElement;
  const removeBtn = el("button", "", "remove") as HTMLButtonElement;
  addBtn.onclick = () => input.value && onSubmit(input.value, "add");
  removeBtn.onclick = () => input.value && onSubmit(input.value, "remove");
  for (const node of [input, addBtn, removeBtn]) root.appendChild(node);
}
