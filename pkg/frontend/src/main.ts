/**
 * Browser entry point: read the backend base URL from the page config,
 * open a session, and mount the view.
 */

import { mount } from './render.js';
import { ConsultationStore, DEFAULT_CONFIG } from './session.js';

interface PageConfig {
  baseUrl?: string;
}

function pageConfig(): PageConfig {
  return (globalThis as { TRIAGE_CHAT_CONFIG?: PageConfig }).TRIAGE_CHAT_CONFIG ?? {};
}

export function boot(doc: Document): ConsultationStore {
  const container = doc.getElementById('chat-root');
  if (!container) throw new Error('missing #chat-root element');
  const store = new ConsultationStore({
    baseUrl: pageConfig().baseUrl ?? DEFAULT_CONFIG.baseUrl,
  });
  mount(doc, container, store);
  void store.newSession();
  return store;
}

if (typeof document !== 'undefined') {
  boot(document);
}
