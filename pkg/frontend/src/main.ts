import { OperatorConsole } from "./console.js";

const root = document.getElementById("console");
if (!root) throw new Error("missing #console mount point");
const station = new OperatorConsole(root, "");
void station.connect();
