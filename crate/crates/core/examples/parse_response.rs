//! Builds the compilation prompt for the house example and parses a chatty
//! model reply into a graph.
//!
//!     cargo run --example parse_response

use cdi::llm::{build_prompt, compile_graph, parse_edge_list, render_edge_list};
use cdi::Proposition;

const REPLY: &str = r#"Sure! After weighing each pair:

```python
[("a", "b", 9), ('a', 'c', 1), ('c', 'b', 0), ('a', 'b', 4)]
```

Pairs I considered unrelated were omitted."#;

fn main() -> cdi::Result<()> {
    let props = vec![
        Proposition::new("a", "The house is hot."),
        Proposition::new("b", "The house is bright."),
        Proposition::new("c", "The house is cold and dark."),
    ];
    let prompt = build_prompt(&props)?;
    println!("prompt tail:\n{}", &prompt[prompt.rfind("buildCoherence:").unwrap()..]);

    let list = parse_edge_list(REPLY, &props)?;
    println!("parsed: {}", render_edge_list(&list));
    for w in &list.warnings {
        println!("warning: {w}");
    }
    let graph = compile_graph(&list, &props)?;
    for e in graph.edges() {
        println!("{} -- {}: {:+}", e.u, e.v, e.weight);
    }
    Ok(())
}
