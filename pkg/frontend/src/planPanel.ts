/**
 * Shows the plan behind the latest answer, verbatim, or the diagnostics
 * of a failed one. Hidden until there is something to show.
 */
export class PlanPanel {
  private root: HTMLElement;
  private body: HTMLPreElement;
  private copyButton: HTMLButtonElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("plan-panel");
    this.root.hidden = true;

    const header = document.createElement("div");
    header.className = "plan-header";
    const title = document.createElement("span");
    title.textContent = "plan";
    this.copyButton = document.createElement("button");
    this.copyButton.type = "button";
    this.copyButton.className = "plan-copy";
    this.copyButton.textContent = "copy";
    this.copyButton.addEventListener("click", () => {
      const text = this.body.textContent ?? "";
      navigator.clipboard?.writeText(text).catch(() => {});
    });
    header.append(title, this.copyButton);

    this.body = document.createElement("pre");
    this.body.className = "plan-body";
    this.root.append(header, this.body);
  }

  showPlan(plan: string) {
    this.body.textContent = plan;
    this.root.classList.remove("plan-failed");
    this.copyButton.hidden = false;
    this.root.hidden = false;
  }

  showFailure(message: string, diagnostics: string[]) {
    const lines = diagnostics.length > 0 ? diagnostics : [message];
    this.body.textContent = lines.join("\n");
    this.root.classList.add("plan-failed");
    this.copyButton.hidden = true;
    this.root.hidden = false;
  }

  clear() {
    this.body.textContent = "";
    this.root.hidden = true;
  }
}
