import { ApiClient } from "./api.js";
import { EditorCore } from "./state.js";
import { mount } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? "http://127.0.0.1:8077";

const core = new EditorCore(new ApiClient(base));
mount(core, document.getElementById("app")!);
