import { initContentScript } from "./content";

initContentScript();
