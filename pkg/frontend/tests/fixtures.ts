import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { Table, loadCsv } from '../src/csv.js';

export const QFI_SWEEP_CSV = `temperature,n_chains,round_j,qfi,qfi_thermal,ratio,cumulative_fi
0.5,1,1,0.001,0.84,0.0002,0.001
1,1,1,0.0008,0.19,0.00017,0.0008
0.5,2,1,0.004,0.84,0.0008,0.004
1,2,1,0.003,0.19,0.0006,0.003
0.5,1,2,0.001,0.84,0.0002,0.002
1,1,2,0.0008,0.19,0.00017,0.0016
0.5,2,2,0.004,0.84,0.0008,0.008
1,2,2,0.003,0.19,0.0006,0.006
`;

export const INFOFLOW_CSV = `time,subject,distance,sigma,event_kind,round_j,chain_k
0,S,2,,system-ancilla,1,1
0.5,S,1.9,-0.2,system-ancilla,1,1
1,S,1.8,-0.2,system-ancilla,1,1
0,A1,0,,system-ancilla,1,1
0.5,A1,0.1,0.2,system-ancilla,1,1
1,A1,0.2,0.2,system-ancilla,1,1
0,joint,2,,system-ancilla,1,1
0.5,joint,2,0,system-ancilla,1,1
1,joint,2,0,system-ancilla,1,1
`;

export const MUTUAL_INFO_CSV = `checkpoint,n_chains,chain_k,mutual_information
1,1,1,0.002
1,2,1,0.002
3,2,2,0.007
1,3,1,0.002
3,3,2,0.007
5,3,3,0.014
`;

export const CHECKPOINT_CSV = `temperature,checkpoint,event_kind,round_j,party,qfi
0.5,1,system-ancilla,1,S,0
1,1,system-ancilla,1,S,0
0.5,1,system-ancilla,1,A1,0.84
1,1,system-ancilla,1,A1,0.19
`;

export function tableFromString(text: string, name = 'fixture.csv'): Table {
  const dir = mkdtempSync(join(tmpdir(), 'colltherm-figs-'));
  const path = join(dir, name);
  writeFileSync(path, text);
  return loadCsv(path);
}

export function writeTemp(text: string, name = 'fixture.csv'): string {
  const dir = mkdtempSync(join(tmpdir(), 'colltherm-figs-'));
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}
