/** Linear story panel: the overview paragraph plus expanded component cards. */

import type { StoryComponentDto } from '../api.js';
import { renderChart } from '../charts.js';

export interface StoryCallbacks {
  onDeselect?: (insightId: string) => void;
}

export function renderStory(
  story: string,
  components: StoryComponentDto[],
  callbacks: StoryCallbacks = {},
): HTMLElement {
  const root = document.createElement('div');
  root.className = 'story-panel';

  const heading = document.createElement('h2');
  heading.textContent = 'Story';
  root.appendChild(heading);

  const paragraph = document.createElement('p');
  paragraph.className = 'story-paragraph';
  paragraph.textContent = story || 'Select insights to build the story.';
  root.appendChild(paragraph);

  const cards = document.createElement('div');
  cards.className = 'story-cards';
  for (const component of components) {
    const card = document.createElement('div');
    card.className = 'story-card';
    card.dataset.insight = component.insightId;

    const title = document.createElement('h4');
    title.textContent = `${component.insightId} — ${component.title}`;
    card.appendChild(title);

    const remove = document.createElement('button');
    remove.className = 'remove-btn';
    remove.textContent = '×';
    remove.title = 'remove from story';
    remove.addEventListener('click', () => callbacks.onDeselect?.(component.insightId));
    card.appendChild(remove);

    const text = document.createElement('p');
    text.textContent = component.text;
    card.appendChild(text);

    card.appendChild(renderChart(component.chartSpec));
    cards.appendChild(card);
  }
  root.appendChild(cards);
  return root;
}
