import { escapeHtml } from "../render.js";

export function renderLogin(error?: string): string {
  return `<section class="login">
<h2>Sign in</h2>
${error ? `<p class="rejected">${escapeHtml(error)}</p>` : ""}
<form id="login-form">
  <label>Login <input name="login" autocomplete="username"></label>
  <label>Password <input name="password" type="password" autocomplete="current-password"></label>
  <button type="submit">Sign in</button>
</form>
</section>`;
}
