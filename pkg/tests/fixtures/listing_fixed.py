for step, inputs in enumerate(tqdm(eval_dataloader, desc="Iteration", disable=args.local_rank not in [-1, 0])):
    for k, v in inputs.items():
        optimizer.zero_grad()
        inputs[k] = v.to(args.device)
    outputs = model(**inputs, head_mask=head_mask)
    loss, logits, all_attentions = (
            outputs[0],
            outputs[1],
            outputs[-1],
        )
    loss.backward()  # Back propagate to populate the gradients in the head mask
