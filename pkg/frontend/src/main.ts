import { ApiClient } from './api';
import { App } from './app';

const root = document.querySelector<HTMLDivElement>('#app');
if (!root) {
  throw new Error('root element #app not found');
}

const baseUrl = (root.dataset.service ?? '').replace(/\/$/, '') || 'http://localhost:8000';
const app = new App(root, new ApiClient(baseUrl));
void app.start('standard');
