/**
 * Hash router with role gating that mirrors the server's: annotator
 * sessions can never resolve a manager route, and vice versa. Forbidden
 * navigation redirects rather than rendering.
 */

import type { Role } from "./types.js";

export interface Session {
  token: string | null;
  role: Role | null;
}

export type Resolution =
  | { view: "login" }
  | { view: "dashboard" }
  | { view: "campaign-new" }
  | { view: "campaign-detail"; campaignId: string }
  | { view: "workspace" }
  | { view: "task-detail"; taskId: string }
  | { redirect: string };

const MANAGER_HOME = "#/dashboard";
const ANNOTATOR_HOME = "#/tasks";

export function homeFor(role: Role): string {
  return role === "manager" ? MANAGER_HOME : ANNOTATOR_HOME;
}

export function resolve(hash: string, session: Session): Resolution {
  const path = (hash.replace(/^#/, "") || "/").split("?")[0] ?? "/";
  const parts = path.split("/").filter(Boolean);

  if (parts[0] === "login") return { view: "login" };
  if (!session.token || !session.role) return { redirect: "#/login" };

  const role = session.role;
  if (parts.length === 0) return { redirect: homeFor(role) };

  if (parts[0] === "dashboard" && parts.length === 1) {
    return role === "manager" ? { view: "dashboard" } : { redirect: ANNOTATOR_HOME };
  }
  if (parts[0] === "campaigns") {
    if (role !== "manager") return { redirect: ANNOTATOR_HOME };
    if (parts[1] === "new") return { view: "campaign-new" };
    if (parts[1]) return { view: "campaign-detail", campaignId: parts[1] };
    return { view: "dashboard" };
  }
  if (parts[0] === "tasks") {
    if (role !== "annotator") return { redirect: MANAGER_HOME };
    if (parts[1]) return { view: "task-detail", taskId: parts[1] };
    return { view: "workspace" };
  }
  return { redirect: homeFor(role) };
}
