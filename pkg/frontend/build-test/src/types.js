"use strict";
/** Wire types mirroring the session service's JSON schema (schema_version 1). */
Object.defineProperty(exports, "__esModule", { value: true });
exports.nodeKey = nodeKey;
exports.sameNode = sameNode;
function nodeKey(node) {
    return typeof node === "string" ? node : `n${node[0]}.${node[1]}`;
}
function sameNode(a, b) {
    return nodeKey(a) === nodeKey(b);
}
