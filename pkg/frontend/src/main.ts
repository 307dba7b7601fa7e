import { RenderClient } from "./api.js";
import { CarveApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const app = new CarveApp(new RenderClient(""), root);
void app.start();
