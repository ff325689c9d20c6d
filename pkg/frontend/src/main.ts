import "leaflet/dist/leaflet.css";
import "./style.css";
import { App } from "./app";
import { readConfig } from "./config";

new App(document.getElementById("app")!, readConfig());
