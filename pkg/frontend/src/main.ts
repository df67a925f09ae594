/** Browser entry point: tabs, tables, polling and operator actions. */

import { ApiClient } from "./api.js";
import { countdown } from "./format.js";
import { DashboardStore, Poller } from "./store.js";
import { connectionBanner, ledgerRow, recommendationRow, totalsBar } from "./view.js";

const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
const store = new DashboardStore(new ApiClient(apiBase));
const poller = new Poller(store, 5000);

const el = (id: string) => document.getElementById(id)!;

function render(): void {
  el("banner").innerHTML = connectionBanner(store.connected, store.feedStatus);
  const now = new Date();
  el("rec-body").innerHTML = store.recommendations.map((r) => recommendationRow(r, now)).join("");
  el("ledger-body").innerHTML = store.ledger.map(ledgerRow).join("");
  el("totals").textContent = totalsBar(store.stats);
  const errors = [...store.actionErrors.values()];
  el("action-error").textContent = errors.length ? errors[errors.length - 1] : "";
}

function tickCountdowns(): void {
  const now = new Date();
  document.querySelectorAll<HTMLElement>(".countdown").forEach((cell) => {
    const kickoff = cell.dataset.kickoff;
    if (kickoff) cell.textContent = countdown(kickoff, now);
  });
}

function wireTabs(): void {
  document.querySelectorAll<HTMLElement>(".tab").forEach((tab) => {
    tab.addEventListener("click", () => {
      document.querySelectorAll(".tab").forEach((t) => t.classList.remove("active"));
      document.querySelectorAll(".pane").forEach((p) => p.classList.remove("active"));
      tab.classList.add("active");
      el(tab.dataset.pane!).classList.add("active");
    });
  });
}

function wireActions(): void {
  el("rec-body").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest("button.place");
    if (!button) return;
    const row = button.closest<HTMLTableRowElement>("tr[data-rec-id]")!;
    const recId = Number(row.dataset.recId);
    const stake = Number(row.querySelector<HTMLInputElement>("input.stake")!.value);
    const acceptedRaw = row.querySelector<HTMLInputElement>("input.accepted")!.value;
    const accepted = acceptedRaw === "" ? null : Number(acceptedRaw);
    const mode = row.querySelector<HTMLSelectElement>("select.mode")!.value as "paper" | "real";
    void store.placeBet(recId, stake, accepted, mode);
  });

  el("ledger-body").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>("button.settle");
    if (!button) return;
    const row = button.closest<HTMLTableRowElement>("tr[data-entry-id]")!;
    void store.settle(Number(row.dataset.entryId), button.dataset.result as "won" | "lost" | "void");
  });
}

store.subscribe(render);
wireTabs();
wireActions();
poller.start();
setInterval(tickCountdowns, 1000);
