//! Text forms of an [`EaProgram`]: the `EEA v1` file format and the C-like
//! pseudo-code listing. Both parse back to the identical program.

use crate::error::{Error, Result};
use crate::program::{EaProgram, Instruction, Opcode};

const MAGIC: &str = "EEA v1";

/// Serialises to the `EEA v1` program file format.
pub fn to_text(program: &EaProgram) -> String {
    let mut out = format!(
        "{MAGIC}\nregisters {}\ngenerations {}\n",
        program.num_registers, program.micro_generations
    );
    for ins in &program.instructions {
        out.push_str(&ins.to_string());
        out.push('\n');
    }
    out
}

fn header_value(line: Option<(usize, &str)>, key: &str, expected_line: usize) -> Result<usize> {
    let (no, text) = line.ok_or_else(|| Error::parse(expected_line, format!("missing `{key}` line")))?;
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse()
            .map_err(|_| Error::parse(no, format!("`{key}` expects a non-negative integer, got `{v}`"))),
        _ => Err(Error::parse(no, format!("expected `{key} <N>`, got `{}`", text.trim()))),
    }
}

/// Parses an `EEA v1` program file. Blank lines are ignored after the header.
pub fn parse_program(text: &str) -> Result<EaProgram> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        Some((no, l)) => {
            return Err(Error::parse(no, format!("expected `{MAGIC}` header, got `{}`", l.trim())))
        }
        None => return Err(Error::parse(1, "empty program file")),
    }
    let num_registers = header_value(lines.next(), "registers", 2)?;
    let micro_generations = header_value(lines.next(), "generations", 3)?;
    let mut instructions = Vec::new();
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let ins = parse_instruction(line).map_err(|m| Error::parse(no, m))?;
        if ins.max_register() >= num_registers {
            return Err(Error::parse(
                no,
                format!("register index out of range 0..{num_registers}"),
            ));
        }
        instructions.push(ins);
    }
    if instructions.is_empty() {
        return Err(Error::parse(4, "program has no instructions"));
    }
    EaProgram::new(instructions, num_registers, micro_generations)
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn eat(&mut self, token: &str) -> std::result::Result<(), String> {
        match self.rest.strip_prefix(token) {
            Some(r) => {
                self.rest = r;
                Ok(())
            }
            None => Err(format!("expected `{token}` at `{}`", self.rest)),
        }
    }

    fn number(&mut self) -> std::result::Result<usize, String> {
        let end = self.rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest.len());
        if end == 0 {
            return Err(format!("expected a register index at `{}`", self.rest));
        }
        let (digits, rest) = self.rest.split_at(end);
        self.rest = rest;
        digits.parse().map_err(|_| format!("register index `{digits}` too large"))
    }

    fn ident(&mut self) -> &'a str {
        let end = self
            .rest
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(self.rest.len());
        let (id, rest) = self.rest.split_at(end);
        self.rest = rest;
        id
    }

    fn register(&mut self) -> std::result::Result<usize, String> {
        self.eat("Pop[")?;
        let n = self.number()?;
        self.eat("]")?;
        Ok(n)
    }
}

/// Parses one `Pop[d] = Op(...);` line. Whitespace is insignificant.
pub fn parse_instruction(line: &str) -> std::result::Result<Instruction, String> {
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { rest: &compact };
    let dest = cur.register()?;
    cur.eat("=")?;
    let name = cur.ident();
    let op = match name {
        "Select" => Opcode::Select,
        "Crossover" => Opcode::Crossover,
        "Mutate" => Opcode::Mutate,
        other => return Err(format!("unknown opcode `{other}`")),
    };
    cur.eat("(")?;
    let src1 = cur.register()?;
    let ins = if op == Opcode::Mutate {
        Instruction::mutate(dest, src1)
    } else {
        cur.eat(",")?;
        let src2 = cur.register()?;
        Instruction { op, dest, src1, src2 }
    };
    cur.eat(")")?;
    let _ = cur.eat(";");
    if !cur.rest.is_empty() {
        return Err(format!("trailing characters `{}`", cur.rest));
    }
    Ok(ins)
}

/// Renders the program as a generational EA listing: population
/// initialisation, then the instructions inside the generation loop.
pub fn render_pseudocode(program: &EaProgram) -> String {
    let mut out = format!(
        "void LGP_Program(Chromosome Pop[{n}]) // a population with {n} individuals\n{{\n",
        n = program.num_registers
    );
    out.push_str("    Randomly_initialize_the_population();\n");
    out.push_str(&format!(
        "    for (int k = 0; k < {}; k++){{ // repeat for a number of generations\n",
        program.micro_generations
    ));
    for ins in &program.instructions {
        out.push_str("        ");
        out.push_str(&ins.to_string());
        out.push('\n');
    }
    out.push_str("    }\n}\n");
    out
}

fn strip_comment(line: &str) -> &str {
    line.split("//").next().unwrap_or("")
}

fn number_after(text: &str, marker: &str) -> Option<usize> {
    let start = text.find(marker)? + marker.len();
    let digits: String = text[start..]
        .chars()
        .skip_while(|c| c.is_whitespace())
        .take_while(|c| c.is_ascii_digit())
        .collect();
    digits.parse().ok()
}

/// Inverse of [`render_pseudocode`].
pub fn parse_pseudocode(text: &str) -> Result<EaProgram> {
    let mut num_registers = None;
    let mut micro_generations = None;
    let mut instructions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() || line == "{" || line == "}" {
            continue;
        }
        if line.starts_with("void") {
            num_registers = Some(
                number_after(line, "Pop[")
                    .ok_or_else(|| Error::parse(no, "cannot read population size from header"))?,
            );
        } else if line.starts_with("for") {
            micro_generations = Some(
                number_after(line, "<")
                    .ok_or_else(|| Error::parse(no, "cannot read generation count from loop header"))?,
            );
        } else if line.starts_with("Randomly_initialize") {
            continue;
        } else {
            instructions.push(parse_instruction(line).map_err(|m| Error::parse(no, m))?);
        }
    }
    let num_registers = num_registers.ok_or_else(|| Error::parse(1, "missing LGP_Program header"))?;
    let micro_generations =
        micro_generations.ok_or_else(|| Error::parse(1, "missing generation loop"))?;
    EaProgram::new(instructions, num_registers, micro_generations)
}
