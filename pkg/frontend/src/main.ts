import { App } from "./app.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");

const proto = window.location.protocol === "https:" ? "wss" : "ws";
const app = new App({ root, url: `${proto}://${window.location.host}/ws` });
app.start();
