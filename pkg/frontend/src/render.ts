/**
 * DOM rendering for the consultation view.
 *
 * Pure projection of the store state into a container element:
 * message bubbles, referral cards (shown iff results are non-empty), a
 * full-width emergency banner with a confirm control, a moderation
 * notice, the inline validation notice, the retry affordance, and the
 * send controls (disabled while a turn is in flight).
 */

import type { ConsultationStore, UiSessionState } from './session.js';
import type { ReferralCard } from './wire.js';

function el(
  doc: Document,
  tag: string,
  className: string,
  text?: string,
): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderCards(doc: Document, results: ReferralCard[]): HTMLElement {
  const wrap = el(doc, 'section', 'referral-cards');
  for (const result of results) {
    const card = el(doc, 'article', 'referral-card');
    card.appendChild(el(doc, 'h3', 'card-diagnosis', result.Diagnosis));
    card.appendChild(el(doc, 'span', 'card-doctor-badge', result.Doctor));
    card.appendChild(el(doc, 'p', 'card-description', result.Description));
    wrap.appendChild(card);
  }
  return wrap;
}

export function render(
  doc: Document,
  container: HTMLElement,
  state: UiSessionState,
  actions: {
    onSend: (text: string) => void;
    onRetry: () => void;
    onConfirmEmergency: () => void;
  },
): void {
  container.textContent = '';
  container.dataset.uiState = state.uiState;

  if (state.offline) {
    container.appendChild(
      el(doc, 'div', 'offline-notice', 'The consultation service is unreachable.'),
    );
  }

  if (state.uiState === 'emergency') {
    const banner = el(doc, 'div', 'emergency-banner');
    const lastSystem = [...state.messages].reverse().find((m) => m.role === 'system');
    banner.appendChild(el(doc, 'p', 'emergency-text', lastSystem?.text ?? ''));
    const confirm = el(doc, 'button', 'emergency-confirm', 'I understand');
    confirm.addEventListener('click', () => actions.onConfirmEmergency());
    banner.appendChild(confirm);
    container.appendChild(banner);
  }

  if (state.uiState === 'moderated') {
    container.appendChild(
      el(doc, 'div', 'moderation-notice', 'Please keep the conversation medical.'),
    );
  }

  const thread = el(doc, 'main', 'message-thread');
  for (const message of state.messages) {
    thread.appendChild(el(doc, 'div', `bubble bubble-${message.role}`, message.text));
  }
  container.appendChild(thread);

  if (state.latestResults.length > 0) {
    container.appendChild(renderCards(doc, state.latestResults));
  }

  if (state.validationNotice !== null) {
    container.appendChild(el(doc, 'div', 'validation-notice', state.validationNotice));
  }

  if (state.retryText !== null) {
    const retry = el(doc, 'button', 'retry-button', 'Retry');
    retry.addEventListener('click', () => actions.onRetry());
    container.appendChild(retry);
  }

  const form = el(doc, 'form', 'composer') as HTMLFormElement;
  const input = el(doc, 'input', 'composer-input') as HTMLInputElement;
  input.type = 'text';
  input.placeholder = 'Describe your symptoms...';
  input.disabled = state.sending || state.inputDisabled;
  const send = el(doc, 'button', 'composer-send', 'Send') as HTMLButtonElement;
  send.type = 'submit';
  send.disabled = state.sending || state.inputDisabled;
  form.appendChild(input);
  form.appendChild(send);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text) actions.onSend(text);
  });
  container.appendChild(form);
}

/** Wire a store to a container: re-render on every state change. */
export function mount(
  doc: Document,
  container: HTMLElement,
  store: ConsultationStore,
): () => void {
  const actions = {
    onSend: (text: string) => void store.sendTurn(text),
    onRetry: () => void store.retryLastTurn(),
    onConfirmEmergency: () => store.confirmEmergency(),
  };
  const draw = () => render(doc, container, store.getState(), actions);
  const unsubscribe = store.subscribe(draw);
  draw();
  return unsubscribe;
}
