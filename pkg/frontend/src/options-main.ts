import { initOptionsPage } from "./options";

void initOptionsPage();
